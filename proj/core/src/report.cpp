#include "prudent/report.hpp"

#include "prudent/version.hpp"

namespace prudent {

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["operation"] = operation;
  j["code_version"] = kCodeVersion;
  j["inputs"] = inputs;
  j["values"] = values;
  j["witness"] = witness;
  if (tail_allowance)
    j["tail_allowance"] = *tail_allowance;
  else
    j["tail_allowance"] = nullptr;
  j["pass"] = pass;
  j["warnings"] = warnings;
  return j;
}

}  // namespace prudent
