#pragma once

#include <stdexcept>
#include <string>

namespace prudent {

/// Raised when a caller violates an operation's precondition (dimension
/// mismatch, parameter out of range, malformed input).
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an exponential computation would exceed its configured node
/// budget. Enumeration never truncates silently.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractError(what);
}

}  // namespace prudent
