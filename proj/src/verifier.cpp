#include "freeze/verifier.hpp"

#include <algorithm>
#include <cmath>

#include "freeze/error.hpp"
#include "freeze/exact_sampler.hpp"
#include "freeze/gaussian_limits.hpp"
#include "freeze/random.hpp"
#include "freeze/stats.hpp"

namespace freeze {

std::string to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::A: return "A";
    case RegimeKind::B1: return "B1";
    case RegimeKind::B2: return "B2";
    case RegimeKind::B3: return "B3";
    case RegimeKind::D: return "D";
  }
  return "?";
}

Regime::Regime(RegimeKind kind, RootSystemSpec spec, double t)
    : kind_(kind), spec_(spec), t_(t) {
  require(std::isfinite(t) && t > 0.0, "time must be > 0");
  TargetRequest request = TargetRequest::A(spec.n());
  switch (kind) {
    case RegimeKind::A: break;
    case RegimeKind::B1: request = TargetRequest::B(spec.n(), spec.k1() / spec.k2()); break;
    case RegimeKind::B2: return;
    case RegimeKind::B3:
    case RegimeKind::D: request = TargetRequest::D(spec.n()); break;
  }
  target_ = freezing_target(request).coords;
  sigma_ = covariance(precision_matrix(request));
}

Regime Regime::A(int n, double k, double t) {
  require(k > 0.0, "regime A needs k > 0");
  return Regime(RegimeKind::A, RootSystemSpec::A(n, k), t);
}

Regime Regime::B1(int n, double nu, double beta, double t) {
  require(std::isfinite(nu) && nu > 0.0, "regime B1 needs nu > 0 (use B0 for nu = 0)");
  require(std::isfinite(beta) && beta > 0.0, "regime B1 needs beta > 0");
  return Regime(RegimeKind::B1, RootSystemSpec::B(n, nu * beta, beta), t);
}

Regime Regime::B2(int n, double k1, double k2, double t) {
  require(k1 > 0.0 && k2 > 0.0, "regime B2 needs k1 > 0 and k2 > 0");
  return Regime(RegimeKind::B2, RootSystemSpec::B(n, k1, k2), t);
}

Regime Regime::B3(int n, double k1, double k2, double t) {
  require(n >= 2, "regime B3 needs n >= 2");
  require(k2 > 0.0, "regime B3 needs k2 > 0");
  return Regime(RegimeKind::B3, RootSystemSpec::B(n, k1, k2), t);
}

Regime Regime::D(int n, double k, double t) {
  require(k > 0.0, "regime D needs k > 0");
  return Regime(RegimeKind::D, RootSystemSpec::D(n, k), t);
}

double Regime::scale() const {
  switch (kind_) {
    case RegimeKind::A: return std::sqrt(2.0 * spec_.k() * t_);
    case RegimeKind::B1:
    case RegimeKind::B3:
    case RegimeKind::D: return std::sqrt(spec_.k() * t_);
    case RegimeKind::B2: break;
  }
  throw InvalidArgument("regime B2 has no scaled freezing target");
}

std::vector<double> Regime::center() const {
  const double s = scale();
  std::vector<double> c(target_);
  for (double& v : c) v *= s;
  return c;
}

void Regime::describe(VerificationReport& report) const {
  report.param("regime", to_string(kind_));
  report.param("system", spec_.describe());
  report.param("n", spec_.n());
  report.param("t", t_);
  if (spec_.kind() == RootKind::B) {
    report.param("k1", spec_.k1());
    report.param("k2", spec_.k2());
    if (kind_ == RegimeKind::B1) report.param("nu", spec_.k1() / spec_.k2());
  } else {
    report.param("k", spec_.k());
  }
}

namespace {

void require_match(const Regime& regime, const SampleBatch& batch) {
  require(batch.spec() == regime.spec() && batch.t() == regime.t(),
          "batch (" + batch.spec().describe() + ", t=" + format_number(batch.t()) +
              ") does not match the regime (" + regime.spec().describe() +
              ", t=" + format_number(regime.t()) + ")");
}

void record_batch(VerificationReport& report, const SampleBatch& batch) {
  report.param("method", to_string(batch.method()));
  report.param("seed", std::to_string(batch.seed()));
  report.param("count", static_cast<int>(batch.count()));
  for (const auto& [key, value] : batch.parameters) report.param("batch." + key, value);
}

}  // namespace

double covariance_error_noise(const Eigen::MatrixXd& cov, std::size_t count) {
  const double tr = cov.trace();
  const double fro = cov.norm();
  return std::sqrt(tr * tr + fro * fro) / (std::sqrt(static_cast<double>(count)) * fro);
}

VerificationReport gaussian_fit_check(const std::string& name, const Eigen::MatrixXd& centered,
                                      const Eigen::MatrixXd& cov, const VerifierConfig& cfg) {
  const auto count = static_cast<std::size_t>(centered.rows());
  const int n = static_cast<int>(centered.cols());
  require(cov.rows() == n && cov.cols() == n, "covariance has the wrong dimension");
  require(count >= stats::kMinKsCount, "Gaussian checks need at least 1000 points");

  VerificationReport report;
  report.name = name;
  report.tolerances["mean_se_factor"] = cfg.mean_se_factor;
  report.tolerances["covariance_tolerance"] = cfg.covariance_tolerance;
  report.tolerances["p_threshold"] = cfg.p_threshold;

  const Eigen::VectorXd mean = centered.colwise().mean();
  const Eigen::MatrixXd dev = centered.rowwise() - mean.transpose();
  const Eigen::MatrixXd sample_cov = dev.transpose() * dev / static_cast<double>(count - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sample_cov, Eigen::EigenvaluesOnly);
  require(eig.eigenvalues().minCoeff() > 1e-12 * std::max(1.0, sample_cov.trace()),
          "empirical covariance is singular; more points are needed");

  const double mean_norm = mean.norm();
  const double mean_bound = cfg.mean_se_factor * std::sqrt(cov.trace() / count);
  const double cov_error = (sample_cov - cov).norm() / cov.norm();

  const Eigen::LLT<Eigen::MatrixXd> chol(cov);
  require(chol.info() == Eigen::Success, "reference covariance is not positive definite");
  const Eigen::MatrixXd white =
      chol.matrixL().solve(centered.transpose());  // n x count
  std::vector<double> d2(count);
  for (std::size_t i = 0; i < count; ++i) d2[i] = white.col(i).squaredNorm();
  const auto chi = stats::ks_one_sample(d2, [&](double x) { return stats::chi_square_cdf(x, n); });

  double ks_min = 1.0;
  for (int j = 0; j < n; ++j) {
    std::vector<double> col(centered.col(j).data(), centered.col(j).data() + count);
    const double var = cov(j, j);
    const auto r = stats::ks_one_sample(col, [&](double x) { return stats::normal_cdf(x, var); });
    report.statistics["ks_p_x" + std::to_string(j + 1)] = r.p_value;
    ks_min = std::min(ks_min, r.p_value);
  }

  report.statistics["count"] = static_cast<double>(count);
  report.statistics["mean_norm"] = mean_norm;
  report.statistics["mean_bound"] = mean_bound;
  report.statistics["cov_rel_error"] = cov_error;
  report.statistics["cov_mc_noise"] = covariance_error_noise(cov, count);
  report.statistics["chi2_ks_statistic"] = chi.statistic;
  report.statistics["chi2_ks_p"] = chi.p_value;
  report.statistics["ks_p_min"] = ks_min;
  report.pass = mean_norm <= mean_bound && cov_error < cfg.covariance_tolerance &&
                chi.p_value > cfg.p_threshold && ks_min > cfg.p_threshold;
  return report;
}

VerificationReport lln_check(const Regime& regime, const SampleBatch& batch,
                             const VerifierConfig& cfg) {
  require(regime.kind() != RegimeKind::B2, "the LLN check has no scaled target in regime B2");
  require_match(regime, batch);
  const int n = regime.n();
  const double s = regime.scale();
  const auto& target = regime.target();
  std::vector<double> mean(n, 0.0), sup(batch.count(), 0.0);
  for (std::size_t i = 0; i < batch.count(); ++i) {
    const auto row = batch.row(i);
    for (int j = 0; j < n; ++j) {
      const double dev = row[j] / s - target[j];
      mean[j] += dev / batch.count();
      sup[i] = std::max(sup[i], std::abs(dev));
    }
  }
  double mean_error = 0.0;
  for (double m : mean) mean_error = std::max(mean_error, std::abs(m));
  const double q = stats::quantile(sup, cfg.lln_quantile);

  VerificationReport report;
  report.name = "lln/" + to_string(regime.kind());
  regime.describe(report);
  record_batch(report, batch);
  report.tolerances["lln_tolerance"] = cfg.lln_tolerance;
  report.tolerances["lln_quantile"] = cfg.lln_quantile;
  report.statistics["max_mean_error"] = mean_error;
  report.statistics["sup_error_quantile"] = q;
  report.pass = mean_error < cfg.lln_tolerance && q < cfg.lln_tolerance;
  return report;
}

VerificationReport clt_gaussian_check(const Regime& regime, const SampleBatch& batch,
                                      const VerifierConfig& cfg) {
  require(regime.kind() == RegimeKind::A || regime.kind() == RegimeKind::B1 ||
              regime.kind() == RegimeKind::D,
          "Gaussian limits exist for regimes A, B1 and D");
  require_match(regime, batch);
  const std::vector<double> c = regime.center();
  VerificationReport report = gaussian_fit_check("clt/" + to_string(regime.kind()),
                                                 batch.to_matrix(c), regime.t() * regime.sigma(),
                                                 cfg);
  regime.describe(report);
  record_batch(report, batch);
  return report;
}

VerificationReport two_sample_check(const std::string& name, const Eigen::MatrixXd& a,
                                    const Eigen::MatrixXd& b, const VerifierConfig& cfg) {
  require(a.cols() == b.cols(), "samples differ in dimension");
  VerificationReport report;
  report.name = name;
  report.tolerances["p_threshold"] = cfg.p_threshold;
  report.param("count_a", static_cast<int>(a.rows()));
  report.param("count_b", static_cast<int>(b.rows()));
  report.param("permutations", cfg.permutations);
  report.param("permutation_seed", std::to_string(cfg.permutation_seed));
  double ks_min = 1.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    std::vector<double> ca(a.col(j).data(), a.col(j).data() + a.rows());
    std::vector<double> cb(b.col(j).data(), b.col(j).data() + b.rows());
    const auto r = stats::ks_two_sample(ca, cb);
    report.statistics["ks_p_x" + std::to_string(j + 1)] = r.p_value;
    ks_min = std::min(ks_min, r.p_value);
  }
  const auto energy = stats::energy_test(a, b, cfg.permutations, cfg.permutation_seed,
                                         cfg.energy_points);
  report.statistics["ks_p_min"] = ks_min;
  report.statistics["energy_statistic"] = energy.statistic;
  report.statistics["energy_p"] = energy.p_value;
  report.statistics["energy_points_a"] = static_cast<double>(energy.used_a);
  report.statistics["energy_points_b"] = static_cast<double>(energy.used_b);
  report.pass = ks_min > cfg.p_threshold && energy.p_value > cfg.p_threshold;
  return report;
}

VerificationReport clt_typeA_limit_check(int n, double k2, double k1, double t,
                                         const SampleBatch& batch_b, const SampleBatch& batch_a,
                                         const VerifierConfig& cfg) {
  const Regime regime = Regime::B2(n, k1, k2, t);
  require_match(regime, batch_b);
  require(batch_a.spec() == RootSystemSpec::A(n, k2) && batch_a.t() == t / 2.0,
          "comparison batch must come from A(n, k2) at time t/2");
  const std::vector<double> shift(n, std::sqrt(2.0 * t * k1));
  VerificationReport report =
      two_sample_check("typeA_limit", batch_b.to_matrix(shift), batch_a.to_matrix(), cfg);
  regime.describe(report);
  report.param("method_b", to_string(batch_b.method()));
  report.param("method_a", to_string(batch_a.method()));
  report.param("seed_b", std::to_string(batch_b.seed()));
  report.param("seed_a", std::to_string(batch_a.seed()));
  return report;
}

VerificationReport one_sided_check(const Regime& regime, const SampleBatch& batch,
                                   const VerifierConfig& cfg) {
  require(regime.kind() == RegimeKind::B3 || regime.kind() == RegimeKind::D,
          "one-sided limits exist for regimes B3 (B0) and D");
  require_match(regime, batch);
  const int n = regime.n();
  Eigen::MatrixXd centered = batch.to_matrix();
  const std::vector<double> c = regime.center();
  std::size_t violations = 0;
  for (Eigen::Index i = 0; i < centered.rows(); ++i) {
    // Raw chamber constraint on the last coordinate: x_n >= 0 for B and
    // |x_n| <= x_{n-1} for D.
    const double raw = centered(i, n - 1);
    if (regime.kind() == RegimeKind::B3 ? raw < 0.0 : std::abs(raw) > centered(i, n - 2)) ++violations;
    centered(i, n - 1) = std::abs(raw);
    for (int j = 0; j < n; ++j) centered(i, j) -= c[j];
  }
  const Eigen::MatrixXd cov = regime.t() * regime.sigma();

  std::vector<double> last(centered.col(n - 1).data(), centered.col(n - 1).data() + centered.rows());
  const double var_last = cov(n - 1, n - 1);
  const auto half = stats::ks_one_sample(
      last, [&](double x) { return stats::half_normal_cdf(x, var_last); });

  VerificationReport report = gaussian_fit_check(
      "one_sided/" + to_string(regime.kind()), centered.leftCols(n - 1),
      cov.topLeftCorner(n - 1, n - 1), cfg);
  regime.describe(report);
  record_batch(report, batch);
  report.statistics["violations"] = static_cast<double>(violations);
  report.statistics["half_normal_ks_statistic"] = half.statistic;
  report.statistics["half_normal_ks_p"] = half.p_value;
  report.statistics["half_normal_variance"] = var_last;
  // Diagnostic only. Since r_N = 0 the last row of S_D is (0, ..., 0, s_NN),
  // and the factor y_N^{2 k1} of the B weight survives the limit, so for
  // k1 > 0 the last coordinate tends to a law with y^2 / v ~ chi^2_{2 k1 + 1}
  // rather than the half-normal (k1 = 0).
  if (regime.kind() == RegimeKind::B3) {
    const double dof = 2.0 * regime.spec().k1() + 1.0;
    std::vector<double> scaled(last.size());
    for (std::size_t i = 0; i < last.size(); ++i) scaled[i] = last[i] * last[i] / var_last;
    const auto wall = stats::ks_one_sample(
        scaled, [&](double x) { return stats::chi_square_cdf(x, dof); });
    report.statistics["wall_law_ks_p"] = wall.p_value;
  }
  // Pass rule: the p-value tests only; mean and covariance are reported.
  report.pass = violations == 0 && half.p_value > cfg.p_threshold &&
                report.statistics.at("chi2_ks_p") > cfg.p_threshold &&
                report.statistics.at("ks_p_min") > cfg.p_threshold;
  report.notes.push_back("pass rule: no violations and half-normal, chi-square and marginal KS p > p_threshold");
  return report;
}

VerificationReport start_distribution_check(int n, double nu, double beta, double t,
                                            const StartDistribution& mu, const SdeSettings& sde,
                                            const VerifierConfig& cfg) {
  const Regime regime = Regime::B1(n, nu, beta, t);
  SdeConfig sde_cfg{regime.spec(), mu, t, sde.steps, sde.paths, sde.seed, sde.wall_buffer,
                    sde.clip};
  const SampleBatch batch = simulate_endpoints(sde_cfg);
  VerificationReport report = clt_gaussian_check(regime, batch, cfg);
  report.name = "start_distribution";
  report.param("start", mu.describe());
  report.statistics["aborted_paths"] = static_cast<double>(batch.diagnostics.aborted_paths);
  return report;
}

VerificationReport one_sided_start_check(int n, double k1, double k2, double t,
                                         const StartDistribution& mu, const SdeSettings& sde,
                                         const VerifierConfig& cfg) {
  const Regime regime = Regime::B3(n, k1, k2, t);
  SdeConfig sde_cfg{regime.spec(), mu, t, sde.steps, sde.paths, sde.seed, sde.wall_buffer,
                    sde.clip};
  const SampleBatch batch = simulate_endpoints(sde_cfg);
  VerificationReport report = one_sided_check(regime, batch, cfg);
  report.name = "one_sided_start";
  report.param("start", mu.describe());
  report.statistics["aborted_paths"] = static_cast<double>(batch.diagnostics.aborted_paths);
  return report;
}

VerificationReport covariance_error_trend(int n, std::vector<double> ks, double t,
                                          std::size_t count, std::uint64_t seed,
                                          const VerifierConfig& cfg) {
  require(ks.size() >= 2, "the trend needs at least two multiplicities");
  VerificationReport report;
  report.name = "covariance_trend/A";
  report.param("n", n);
  report.param("t", t);
  report.param("count", static_cast<int>(count));
  report.param("seed", std::to_string(seed));
  std::vector<double> errors;
  double noise = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const Regime regime = Regime::A(n, ks[i], t);
    const SampleBatch batch = sample_exact(regime.spec(), t, count, derive_seed(seed, i));
    const VerificationReport r = clt_gaussian_check(regime, batch, cfg);
    errors.push_back(r.statistics.at("cov_rel_error"));
    noise = r.statistics.at("cov_mc_noise");
    report.statistics["cov_rel_error@k=" + format_number(ks[i])] = errors.back();
    if (i > 0 && errors[i] > errors[i - 1] + 2.0 * noise) {
      report.notes.push_back("error rose between k=" + format_number(ks[i - 1]) + " and k=" +
                             format_number(ks[i]) + " by more than 2x noise");
    }
  }
  report.statistics["cov_mc_noise"] = noise;
  report.tolerances["noise_multiple"] = 2.0;
  report.pass = errors.back() <= errors.front() + 2.0 * noise;
  return report;
}

}  // namespace freeze
