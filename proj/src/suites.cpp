#include "freeze/suites.hpp"

#include <algorithm>
#include <cmath>

#include "freeze/equilibria.hpp"
#include "freeze/error.hpp"
#include "freeze/exact_sampler.hpp"
#include "freeze/gaussian_limits.hpp"
#include "freeze/random.hpp"
#include "freeze/sde.hpp"
#include "freeze/verifier.hpp"

namespace freeze {

namespace {

constexpr double kStationarityTolerance = 1e-10;
constexpr int kStationarityNMax = 50;
constexpr int kPotentialNMax = 30;
constexpr int kProofConstantNMax = 6;
const std::vector<double> kNuGrid = {0.5, 1.0, 2.5};

template <class T>
T get(const std::optional<T>& v, T fallback) {
  return v ? *v : fallback;
}

std::uint64_t sub_seed(const SuiteOptions& o, std::uint64_t suite, std::uint64_t i) {
  return derive_seed(derive_seed(o.seed, suite), i);
}

VerifierConfig config_for(const SuiteOptions& o, std::uint64_t suite) {
  VerifierConfig cfg;
  cfg.permutation_seed = sub_seed(o, suite, 1000);
  return cfg;
}

std::size_t point_count(const SuiteOptions& o) { return get<std::size_t>(o.count, o.quick ? 2000 : 20000); }

SdeSettings sde_settings(const SuiteOptions& o, std::uint64_t seed) {
  SdeSettings s;
  s.steps = get<int>(o.steps, o.quick ? 500 : 0);
  s.paths = get(o.paths, o.quick ? std::size_t{2000} : kDefaultPaths);
  s.clip = get(o.clip, kDriftClip);
  s.seed = seed;
  return s;
}

void tag(std::vector<VerificationReport>& reports, const std::string& suite) {
  for (auto& r : reports) r.param("suite", suite);
}

std::vector<VerificationReport> identities(const SuiteOptions& o) {
  std::vector<VerificationReport> out;
  require(o.n_max >= 1, "n-max must be >= 1");
  for (int n = 1; n <= o.n_max; ++n) {
    out.push_back(determinant_identity(TargetRequest::A(n)));
    for (double nu : kNuGrid) out.push_back(determinant_identity(TargetRequest::B(n, nu)));
  }
  const int stat_max = o.quick ? 20 : kStationarityNMax;
  const int pot_max = o.quick ? 10 : kPotentialNMax;
  for (const char* s : {"A", "B", "D"}) out.push_back(stationarity_report(s, stat_max));
  for (const char* id : {"A_at_half", "A_sumsq", "B_full", "B_norm"}) {
    out.push_back(potential_identity_report(id, pot_max));
  }
  for (int n = 1; n <= kProofConstantNMax; ++n) {
    out.push_back(proof_constant_limit(ProofConstant::TildeA, n));
    out.push_back(proof_constant_limit(ProofConstant::TildeB, n));
  }
  return out;
}

std::vector<VerificationReport> lln(const SuiteOptions& o) {
  const int n = get(o.n, 3);
  const double k = get(o.k, 1e4);
  const double t = get(o.t, 1.0);
  const std::size_t count = point_count(o);
  const VerifierConfig cfg = config_for(o, 1);
  const std::vector<Regime> regimes = {
      Regime::A(n, k, t), Regime::B1(n, get(o.nu, 1.0), get(o.k2, k), t),
      Regime::B3(n, get(o.k1, 1.0), get(o.k2, k), t), Regime::D(std::max(n, 2), k, t)};
  std::vector<VerificationReport> out;
  for (std::size_t i = 0; i < regimes.size(); ++i) {
    const Regime& r = regimes[i];
    out.push_back(lln_check(r, sample_exact(r.spec(), t, count, sub_seed(o, 1, i)), cfg));
  }
  return out;
}

std::vector<VerificationReport> clt_a(const SuiteOptions& o) {
  const int n = get(o.n, 3);
  const double t = get(o.t, 1.0);
  const std::size_t count = point_count(o);
  const VerifierConfig cfg = config_for(o, 2);
  const Regime r = Regime::A(n, get(o.k, 200.0), t);
  std::vector<VerificationReport> out;
  out.push_back(clt_gaussian_check(r, sample_exact(r.spec(), t, count, sub_seed(o, 2, 0)), cfg));
  out.push_back(covariance_error_trend(n, {50.0, 200.0, 800.0}, t, count, sub_seed(o, 2, 1), cfg));
  return out;
}

std::vector<VerificationReport> clt_b1(const SuiteOptions& o) {
  const int n = get(o.n, 2);
  const double t = get(o.t, 1.0);
  const Regime r = Regime::B1(n, get(o.nu, 1.0), get(o.beta, 200.0), t);
  const VerifierConfig cfg = config_for(o, 3);
  std::vector<double> x0 = o.x0;
  if (x0.empty()) {
    require(n == 2, "clt-b1 needs --x0 when n != 2");
    x0 = {1.0, 0.5};
  }
  const SampleBatch exact = sample_exact(r.spec(), t, point_count(o), sub_seed(o, 3, 0));
  const SdeSettings s = sde_settings(o, sub_seed(o, 3, 1));
  const SampleBatch sde = simulate_endpoints(SdeConfig{r.spec(), StartDistribution::point(x0), t,
                                                       s.steps, s.paths, s.seed, s.wall_buffer,
                                                       s.clip});
  std::vector<VerificationReport> out;
  out.push_back(clt_gaussian_check(r, exact, cfg));
  out.back().name = "clt/B1/start-0";
  out.push_back(clt_gaussian_check(r, sde, cfg));
  out.back().name = "clt/B1/start-x0";
  out.back().param("start", StartDistribution::point(x0).describe());
  const std::vector<double> c = r.center();
  out.push_back(two_sample_check("clt/B1/start-0-vs-x0", exact.to_matrix(c), sde.to_matrix(c), cfg));
  return out;
}

std::vector<VerificationReport> clt_b2(const SuiteOptions& o) {
  const int n = get(o.n, 2);
  const double t = get(o.t, 1.0);
  const double k1 = get(o.k1, 5000.0), k2 = get(o.k2, 1.0);
  const std::size_t count = point_count(o);
  const SampleBatch b = sample_exact(RootSystemSpec::B(n, k1, k2), t, count, sub_seed(o, 4, 0));
  const SampleBatch a = sample_exact(RootSystemSpec::A(n, k2), t / 2.0, count, sub_seed(o, 4, 1));
  return {clt_typeA_limit_check(n, k2, k1, t, b, a, config_for(o, 4))};
}

std::vector<VerificationReport> clt_d(const SuiteOptions& o) {
  const double t = get(o.t, 1.0);
  const Regime r = Regime::D(get(o.n, 2), get(o.k, 200.0), t);
  return {clt_gaussian_check(r, sample_exact(r.spec(), t, point_count(o), sub_seed(o, 5, 0)),
                             config_for(o, 5))};
}

std::vector<VerificationReport> one_sided(const SuiteOptions& o) {
  const int n = get(o.n, 2);
  const double t = get(o.t, 1.0);
  const double k2 = get(o.k2, get(o.k, 200.0));
  const std::size_t count = point_count(o);
  const VerifierConfig cfg = config_for(o, 6);
  const std::vector<Regime> regimes = {Regime::B0(n, k2, t), Regime::B3(n, get(o.k1, 1.0), k2, t),
                                       Regime::D(n, get(o.k, 200.0), t)};
  std::vector<VerificationReport> out;
  for (std::size_t i = 0; i < regimes.size(); ++i) {
    const Regime& r = regimes[i];
    out.push_back(one_sided_check(r, sample_exact(r.spec(), t, count, sub_seed(o, 6, i)), cfg));
  }
  return out;
}

std::vector<VerificationReport> start_dist(const SuiteOptions& o) {
  const int n = get(o.n, 2);
  require(n == 2, "start-dist uses N = 2 start laws");
  const double t = get(o.t, 1.0), nu = get(o.nu, 1.0), beta = get(o.beta, 200.0);
  const VerifierConfig cfg = config_for(o, 7);
  const std::vector<StartDistribution> laws = {
      StartDistribution::uniform_box({0.8, 0.2}, {1.5, 0.7}),
      StartDistribution::mixture({{1.0, 0.5}, {3.0, 1.0}}, {0.5, 0.5})};
  std::vector<VerificationReport> out;
  for (std::size_t i = 0; i < laws.size(); ++i) {
    out.push_back(start_distribution_check(n, nu, beta, t, laws[i], sde_settings(o, sub_seed(o, 7, i)), cfg));
  }
  return out;
}

std::vector<VerificationReport> one_sided_start(const SuiteOptions& o) {
  const int n = get(o.n, 2);
  const double t = get(o.t, 1.0);
  std::vector<double> x0 = o.x0;
  if (x0.empty()) {
    require(n == 2, "one-sided-start needs --x0 when n != 2");
    x0 = {1.0, 0.5};
  }
  return {one_sided_start_check(n, get(o.k1, 0.0), get(o.k2, 200.0), t,
                                StartDistribution::point(x0), sde_settings(o, sub_seed(o, 8, 0)),
                                config_for(o, 8))};
}

}  // namespace

VerificationReport stationarity_report(const std::string& system, int n_max) {
  const RootKind kind = parse_root_kind(system);
  VerificationReport report;
  report.name = "stationarity/" + system;
  report.param("n_max", n_max);
  double worst = 0.0;
  int worst_n = 0;
  double worst_nu = 0.0;
  auto visit = [&](const TargetRequest& req) {
    const double res = stationarity_residual(freezing_target(req));
    if (!(res <= worst)) {
      worst = res;
      worst_n = req.n;
      worst_nu = req.nu;
    }
  };
  for (int n = kind == RootKind::D ? 2 : 1; n <= n_max; ++n) {
    if (kind == RootKind::A) visit(TargetRequest::A(n));
    if (kind == RootKind::D) visit(TargetRequest::D(n));
    if (kind == RootKind::B) {
      for (double nu : kNuGrid) visit(TargetRequest::B(n, nu));
    }
  }
  report.statistics["max_residual"] = worst;
  report.statistics["worst_n"] = worst_n;
  if (kind == RootKind::B) report.statistics["worst_nu"] = worst_nu;
  report.tolerances["max_residual"] = kStationarityTolerance;
  report.pass = worst < kStationarityTolerance;
  return report;
}

VerificationReport potential_identity_report(const std::string& identity, int n_max) {
  const PotentialIdentity id = parse_potential_identity(identity);
  const bool b = id == PotentialIdentity::BFull || id == PotentialIdentity::BNorm;
  VerificationReport report;
  report.name = "potential_identity/" + identity;
  report.param("n_max", n_max);
  double worst = 0.0, tol = 0.0;
  int worst_n = 0;
  bool pass = true;
  for (int n = 1; n <= n_max; ++n) {
    for (double nu : b ? kNuGrid : std::vector<double>{1.0}) {
      const auto r = potential_identity_check(id, n, nu);
      pass = pass && r.pass;
      tol = r.tolerances.at("abs_error");
      const double e = r.statistics.at("abs_error");
      if (!(e <= worst)) {
        worst = e;
        worst_n = n;
      }
    }
  }
  report.statistics["max_abs_error"] = worst;
  report.statistics["worst_n"] = worst_n;
  report.tolerances["abs_error"] = tol;
  report.pass = pass;
  return report;
}

std::vector<VerificationReport> run_suite(const std::string& name, const SuiteOptions& o) {
  std::vector<VerificationReport> out;
  if (name == "identities") out = identities(o);
  else if (name == "lln") out = lln(o);
  else if (name == "clt-a") out = clt_a(o);
  else if (name == "clt-b1") out = clt_b1(o);
  else if (name == "clt-b2") out = clt_b2(o);
  else if (name == "clt-d") out = clt_d(o);
  else if (name == "one-sided") out = one_sided(o);
  else if (name == "start-dist") out = start_dist(o);
  else if (name == "one-sided-start") out = one_sided_start(o);
  else if (name == "all") {
    for (const auto& s : kSuiteNames) {
      if (s == "all" || s == "one-sided-start") continue;
      auto part = run_suite(s, o);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  } else {
    throw InvalidArgument("unknown suite '" + name + "'");
  }
  tag(out, name);
  return out;
}

}  // namespace freeze
