// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Seeds and tolerances are fixed here; the exit status is nonzero when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "freeze/equilibria.hpp"
#include "freeze/exact_sampler.hpp"
#include "freeze/gaussian_limits.hpp"
#include "freeze/random.hpp"
#include "freeze/sde.hpp"
#include "freeze/serialize.hpp"
#include "freeze/suites.hpp"
#include "freeze/verifier.hpp"
#include "oracle/quadrature.hpp"

using namespace freeze;

namespace {

constexpr double kDetTolerance = 1e-8;
constexpr double kStationarityTolerance = 1e-10;
constexpr double kPotentialTolerance = 1e-9;
constexpr double kNormalizationTolerance = 1e-6;
constexpr std::size_t kCount = 20000;
const std::vector<double> kNuGrid = {0.5, 1.0, 2.5};

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string stat(const VerificationReport& r, const std::string& key) {
  const auto it = r.statistics.find(key);
  return key + "=" + (it == r.statistics.end() ? std::string("-") : fmt(it->second));
}

std::string summarize(const VerificationReport& r, const std::vector<std::string>& keys) {
  std::string s = r.name + ":";
  for (const auto& k : keys) s += " " + stat(r, k);
  return s;
}

const std::vector<std::string> kGaussianKeys = {"mean_norm", "mean_bound", "cov_rel_error",
                                                "chi2_ks_p", "ks_p_min"};

void gaussian_report(Outcome& o, const VerificationReport& r) {
  o.require(r.pass, summarize(r, kGaussianKeys));
}

Outcome criterion1() {
  Outcome o;
  double worst_a = 0.0, worst_b = 0.0;
  for (int n = 1; n <= 12; ++n) {
    worst_a = std::max(worst_a, determinant_identity(TargetRequest::A(n)).statistics.at("rel_error"));
    for (double nu : kNuGrid) {
      worst_b = std::max(worst_b, determinant_identity(TargetRequest::B(n, nu)).statistics.at("rel_error"));
    }
  }
  o.require(worst_a < kDetTolerance, "det S = N! for N <= 12: max rel error " + fmt(worst_a));
  o.require(worst_b < kDetTolerance,
            "det S = N! 2^N for N <= 12, nu in {0.5,1,2.5}: max rel error " + fmt(worst_b));
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (const char* s : {"A", "B", "D"}) {
    const auto r = stationarity_report(s, 50);
    o.require(r.statistics.at("max_residual") < kStationarityTolerance,
              summarize(r, {"max_residual", "worst_n"}));
  }
  for (const char* id : {"A_at_half", "A_sumsq", "B_full", "B_norm"}) {
    const auto r = potential_identity_report(id, 30);
    o.require(r.pass && r.statistics.at("max_abs_error") < kPotentialTolerance,
              summarize(r, {"max_abs_error", "worst_n"}));
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  auto check = [&](const std::string& what, double integral, double log_c) {
    const double rel = std::abs(integral * std::exp(log_c) - 1.0);
    o.require(rel < kNormalizationTolerance, what + ": rel error " + fmt(rel));
  };
  for (double k : {0.5, 1.0, 2.5}) {
    check("cA N=1 k=" + fmt(k),
          oracle::chamber_integral_1d(RootKind::A, [](double y) { return std::exp(-y * y / 2); }),
          log_c_a(1, k));
    check("cA N=2 k=" + fmt(k),
          oracle::chamber_integral_2d(RootKind::A,
                                      [k](double a, double b) {
                                        return std::exp(-(a * a + b * b) / 2) * std::pow(a - b, 2 * k);
                                      }),
          log_c_a(2, k));
  }
  for (auto [k1, k2] : {std::pair{0.0, 0.5}, std::pair{0.5, 1.0}, std::pair{2.0, 1.5}}) {
    check("cB N=1 k1=" + fmt(k1),
          oracle::chamber_integral_1d(RootKind::B,
                                      [k1 = k1](double y) { return std::exp(-y * y / 2) * std::pow(y, 2 * k1); }),
          log_c_b(1, k1, k2));
    check("cB N=2 k1=" + fmt(k1) + " k2=" + fmt(k2),
          oracle::chamber_integral_2d(RootKind::B,
                                      [k1 = k1, k2 = k2](double a, double b) {
                                        return std::exp(-(a * a + b * b) / 2) *
                                               std::pow(a * a - b * b, 2 * k2) * std::pow(a * b, 2 * k1);
                                      }),
          log_c_b(2, k1, k2));
  }
  // The D chamber starts at N = 2.
  for (double k : {0.0, 1.0, 2.5}) {
    check("cD N=2 k=" + fmt(k),
          oracle::chamber_integral_2d(RootKind::D,
                                      [k](double a, double b) {
                                        return std::exp(-(a * a + b * b) / 2) * std::pow(a * a - b * b, 2 * k);
                                      }),
          log_c_d(2, k));
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (auto family : {ProofConstant::TildeA, ProofConstant::TildeB}) {
    for (int n = 1; n <= 6; ++n) {
      const auto r = proof_constant_limit(family, n);
      o.require(r.pass, summarize(r, {"rel_error@10", "rel_error@2000", "monotone"}) + " n=" +
                            std::to_string(n));
    }
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  const Regime r = Regime::A(3, 200.0, 1.0);
  gaussian_report(o, clt_gaussian_check(r, sample_exact(r.spec(), 1.0, kCount, 5001)));
  const auto trend = covariance_error_trend(3, {50.0, 200.0, 800.0}, 1.0, kCount, 5002);
  o.require(trend.pass, summarize(trend, {"cov_rel_error@k=50", "cov_rel_error@k=800", "cov_mc_noise"}));
  return o;
}

Outcome criterion6() {
  Outcome o;
  const Regime r = Regime::B1(2, 1.0, 200.0, 1.0);
  const SampleBatch exact = sample_exact(r.spec(), 1.0, kCount, 6001);
  SdeConfig cfg{r.spec(), StartDistribution::point({1.0, 0.5}), 1.0, 2000, kCount, 6002};
  const SampleBatch sde = simulate_endpoints(cfg);
  auto a = clt_gaussian_check(r, exact);
  a.name = "start 0 (exact)";
  gaussian_report(o, a);
  auto b = clt_gaussian_check(r, sde);
  b.name = "start (1, 1/2) (SDE, 2000 steps)";
  gaussian_report(o, b);
  VerifierConfig two;
  two.permutation_seed = 6003;
  const auto c = r.center();
  const auto t = two_sample_check("start 0 vs (1, 1/2)", exact.to_matrix(c), sde.to_matrix(c), two);
  o.require(t.pass, summarize(t, {"ks_p_x1", "ks_p_x2", "energy_p"}));
  return o;
}

Outcome criterion7() {
  Outcome o;
  const SampleBatch b = sample_exact(RootSystemSpec::B(2, 5000.0, 1.0), 1.0, kCount, 7001);
  const SampleBatch a = sample_exact(RootSystemSpec::A(2, 1.0), 0.5, kCount, 7002);
  VerifierConfig cfg;
  cfg.permutation_seed = 7003;
  const auto r = clt_typeA_limit_check(2, 1.0, 5000.0, 1.0, b, a, cfg);
  o.require(r.pass, summarize(r, {"ks_p_x1", "ks_p_x2", "energy_p"}));
  return o;
}

Outcome criterion8() {
  Outcome o;
  const std::vector<std::pair<Regime, std::uint64_t>> cases = {
      {Regime::D(2, 200.0, 1.0), 8001}, {Regime::B0(2, 200.0, 1.0), 8002},
      {Regime::B3(2, 1.0, 200.0, 1.0), 8003}};
  for (const auto& [regime, seed] : cases) {
    const auto r = one_sided_check(regime, sample_exact(regime.spec(), 1.0, kCount, seed));
    std::string label = regime.spec().describe() + " " + summarize(r, {"violations", "half_normal_variance",
                                                                       "half_normal_ks_p", "chi2_ks_p",
                                                                       "ks_p_min", "wall_law_ks_p"});
    o.require(r.pass, label);
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  const std::vector<std::pair<Regime, std::uint64_t>> cases = {
      {Regime::A(3, 1e4, 1.0), 9001}, {Regime::B3(3, 1.0, 1e4, 1.0), 9002}, {Regime::D(3, 1e4, 1.0), 9003}};
  for (const auto& [regime, seed] : cases) {
    const auto r = lln_check(regime, sample_exact(regime.spec(), 1.0, kCount, seed));
    o.require(r.pass, regime.spec().describe() + " " + summarize(r, {"sup_error_quantile", "max_mean_error"}));
  }
  return o;
}

Eigen::MatrixXd gaussian_rows(const Eigen::MatrixXd& cov, std::size_t count, std::uint64_t seed) {
  Engine engine = make_engine(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(cov).matrixL();
  Eigen::MatrixXd z(count, cov.rows());
  for (std::size_t i = 0; i < count; ++i) {
    for (Eigen::Index j = 0; j < cov.rows(); ++j) z(i, j) = normal(engine);
  }
  return z * l.transpose();
}

Outcome criterion10() {
  Outcome o;
  RunManifest m;
  m.command = "acceptance";

  // Byte-identical reruns.
  const auto spec_a = RootSystemSpec::A(3, 10.0);
  const auto spec_b = RootSystemSpec::B(2, 2.0, 5.0);
  const bool exact_same =
      batch_csv(m, sample_exact(spec_a, 1.0, 5000, 10001)) == batch_csv(m, sample_exact(spec_a, 1.0, 5000, 10001));
  const bool mh_same = batch_csv(m, sample_metropolis(spec_b, 1.0, 5000, 10002)) ==
                       batch_csv(m, sample_metropolis(spec_b, 1.0, 5000, 10002));
  SdeConfig sde{spec_a, StartDistribution::point({1.0, 0.0, -1.0}), 1.0, 500, 2000, 10003};
  const bool sde_same = batch_csv(m, simulate_endpoints(sde)) == batch_csv(m, simulate_endpoints(sde));
  o.require(exact_same && mh_same && sde_same, "byte-identical reruns (exact, Metropolis, SDE)");

  // Tridiagonal versus independence Metropolis at N = 2 and 3.
  const std::vector<std::pair<RootSystemSpec, std::uint64_t>> pairs = {
      {RootSystemSpec::A(2, 10.0), 10010}, {RootSystemSpec::B(3, 2.0, 5.0), 10020}};
  for (const auto& [spec, seed] : pairs) {
    VerifierConfig cfg;
    cfg.permutation_seed = seed + 2;
    const auto r = two_sample_check("exact vs indep-metropolis " + spec.describe(),
                                    sample_exact(spec, 1.0, kCount, seed).to_matrix(),
                                    sample_metropolis(spec, 1.0, kCount, seed + 1).to_matrix(), cfg);
    o.require(r.pass, summarize(r, {"ks_p_min", "energy_p"}));
  }

  // Translation invariance of type A.
  const std::vector<double> x0 = {1.0, -1.0};
  const auto ti = translation_invariance_check(2, 5.0, 1.0, 3.0, x0, 10030);
  o.require(ti.pass, summarize(ti, {"ks_p_x1", "ks_p_x2", "energy_p"}));

  // Calibration: exact N(0, t Sigma) rows through the type A Gaussian check.
  const Eigen::MatrixXd cov = covariance(precision_matrix(TargetRequest::A(3)));
  int passed = 0;
  std::string failed;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = gaussian_fit_check("synthetic", gaussian_rows(cov, kCount, seed), cov);
    if (r.pass) {
      ++passed;
    } else {
      failed += " " + std::to_string(seed);
    }
  }
  o.require(passed >= 19, "synthetic N(0, t Sigma) passes on " + std::to_string(passed) +
                              " of 20 seeds" + (failed.empty() ? "" : " (failed:" + failed + ")"));
  return o;
}

struct Criterion {
  int id;
  std::string title;
  double max_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "determinant identities", 1.0, criterion1},
      {2, "equilibrium residuals and potential identities", 5.0, criterion2},
      {3, "normalization constants against quadrature", 30.0, criterion3},
      {4, "proof-constant limits", 1.0, criterion4},
      {5, "CLT type A, N=3, k=200", 120.0, criterion5},
      {6, "CLT type B regime 1, N=2, nu=1, beta=200", 300.0, criterion6},
      {7, "CLT type B regime 2 against type A at t/2", 180.0, criterion7},
      {8, "type D and one-sided limits, N=2, k=200", 180.0, criterion8},
      {9, "LLN at k=1e4", 120.0, criterion9},
      {10, "determinism, cross-method agreement, translation invariance, calibration", 600.0,
       criterion10},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs < c.max_seconds, "runtime " + fmt(secs) + " s < " + fmt(c.max_seconds) + " s");
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str());
    for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
