#include "freeze/report.hpp"

#include <algorithm>
#include <cstdio>

namespace freeze {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void VerificationReport::param(const std::string& key, double value) {
  parameters[key] = format_number(value);
}

void VerificationReport::param(const std::string& key, int value) {
  parameters[key] = std::to_string(value);
}

bool all_pass(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const VerificationReport& r) { return r.pass; });
}

}  // namespace freeze
