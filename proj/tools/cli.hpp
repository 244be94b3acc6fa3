#pragma once

// Command dispatch for the `prudent` tool. `execute` is side-effect free
// apart from the cache; `run` adds argument handling, report files and the
// exit-code contract.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prudent/report.hpp"

namespace prudent::cli {

enum ExitCode : int { kOk = 0, kMathFail = 1, kUsage = 2, kBudget = 3 };

struct RunConfig {
  std::string command;
  int d = 2;
  std::string lambda = "1";
  int n_max = 6;
  std::optional<int> N_max;
  std::optional<std::string> z;
  std::vector<double> k;
  std::optional<double> R;
  int T = 2048;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  std::vector<int> n_list;
  std::optional<int> grid;
  std::optional<int> pair_grid;
  std::string method = "direct";
  std::string source = "exact";
  bool exact = false;
  std::vector<double> band;
  // Execution-only settings; they never change results.
  unsigned workers = 0;
  std::string cache_dir;
  std::string out;
  std::string format = "json";

  /// Canonical form of the fields that determine the result.
  nlohmann::ordered_json to_json() const;
  std::string hash() const;
};

/// Plot-ready matrix emitted alongside (or instead of) the JSON report.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string render() const;
};

struct RunResult {
  Report report;
  std::optional<CsvTable> table;
};

extern const std::vector<std::string> kCommands;

/// Runs one command. Throws ContractError on bad input and BudgetError when
/// a computation exceeds its budget.
RunResult execute(const RunConfig& cfg);

/// Report text in the requested format ("json" or "csv"). Deterministic.
std::string emit_report(const RunResult& result, const RunConfig& cfg, const std::string& format);

/// Writes the emitted report to cfg.out, or to `stdout_sink` if empty, and
/// maps outcomes to exit codes. Errors are written to `err` as one JSON
/// object with a machine-readable reason.
int run(const RunConfig& cfg, std::ostream& stdout_sink, std::ostream& err);

/// Full command line entry point.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace prudent::cli
