#pragma once

#include <map>
#include <string>
#include <vector>

namespace freeze {

// Outcome of one algebraic or statistical check.
//
// `pass` is derived from `statistics` and `tolerances` by the rule that
// produced the report; both maps are kept so the decision can be audited.
struct VerificationReport {
  std::string name;
  std::map<std::string, std::string> parameters;
  std::map<std::string, double> statistics;
  std::map<std::string, double> tolerances;
  std::vector<std::string> notes;
  bool pass = false;

  void param(const std::string& key, const std::string& value) {
    parameters[key] = value;
  }
  void param(const std::string& key, double value);
  void param(const std::string& key, int value);
};

// All reports pass (an empty list passes vacuously).
bool all_pass(const std::vector<VerificationReport>& reports);

std::string format_number(double value);

}  // namespace freeze
