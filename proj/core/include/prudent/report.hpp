#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace prudent {

/// Serializable result record shared by every computation that reports a
/// PASS/FAIL outcome. Field order in the JSON form is fixed.
struct Report {
  std::string operation;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  nlohmann::ordered_json witness;  // null when not applicable
  std::optional<double> tail_allowance;
  bool pass = true;
  std::vector<std::string> warnings;

  nlohmann::ordered_json to_json() const;
};

}  // namespace prudent
