#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "freeze/report.hpp"

namespace freeze {

// Named verification suites. `all` runs every suite except the optional
// one-sided-start.
inline const std::vector<std::string> kSuiteNames = {
    "identities", "lln",      "clt-a",      "clt-b1",          "clt-b2",
    "clt-d",      "one-sided", "start-dist", "one-sided-start", "all"};

// Unset fields take the suite's default. The defaults are the desk-scale
// settings: N = 3, k = 200 for clt-a; N = 2, nu = 1, beta = 200,
// x0 = (1, 1/2) for clt-b1; N = 2, k2 = 1, k1 = 5000 for clt-b2; N = 2,
// k = 200 for clt-d and one-sided; k = 1e4 for lln; 20000 points and the
// SDE defaults elsewhere.
struct SuiteOptions {
  std::uint64_t seed = 0;
  bool quick = false;
  int n_max = 12;
  std::optional<int> n;
  std::optional<double> k, k1, k2, nu, beta, t;
  std::optional<std::size_t> count, paths;
  std::optional<int> steps;
  std::optional<double> clip;
  std::vector<double> x0;
};

// Throws InvalidArgument for an unknown suite name.
std::vector<VerificationReport> run_suite(const std::string& name, const SuiteOptions& options);

// Aggregate of many identity reports: passes when all pass; statistics are
// the worst values.
VerificationReport stationarity_report(const std::string& system, int n_max);
VerificationReport potential_identity_report(const std::string& identity, int n_max);

}  // namespace freeze
