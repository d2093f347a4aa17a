#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "freeze/equilibria.hpp"
#include "freeze/report.hpp"
#include "freeze/root_system.hpp"
#include "freeze/sample_batch.hpp"
#include "freeze/sde.hpp"

namespace freeze {

struct VerifierConfig {
  double p_threshold = 0.01;
  double covariance_tolerance = 0.05;
  double mean_se_factor = 3.0;
  double lln_tolerance = 0.05;
  double lln_quantile = 0.95;
  int permutations = 200;
  std::size_t energy_points = 1000;
  std::uint64_t permutation_seed = 0;
};

// Which freezing limit a batch is tested against.
//   A:  pair multiplicity k -> infinity; centre sqrt(2 k t) z.
//   B1: nu = k1/k2 fixed, beta = k2 -> infinity; centre sqrt(beta t) r(nu).
//   B2: k2 fixed, k1 -> infinity; shift sqrt(2 t k1) 1, limit is type A at t/2.
//   B3: k1 fixed (B0 when k1 = 0), k2 -> infinity; centre sqrt(k2 t) r_D,
//       one-sided limit.
//   D:  k -> infinity; centre sqrt(k t) r_D.
enum class RegimeKind { A, B1, B2, B3, D };
std::string to_string(RegimeKind kind);

class Regime {
 public:
  static Regime A(int n, double k, double t);
  static Regime B1(int n, double nu, double beta, double t);
  static Regime B2(int n, double k1, double k2, double t);
  static Regime B3(int n, double k1, double k2, double t);
  static Regime B0(int n, double k2, double t) { return B3(n, 0.0, k2, t); }
  static Regime D(int n, double k, double t);

  RegimeKind kind() const { return kind_; }
  const RootSystemSpec& spec() const { return spec_; }
  double t() const { return t_; }
  int n() const { return spec_.n(); }

  // sqrt(m t) with m = 2k, beta, k2 or k; B2 has no scaled target.
  double scale() const;
  // Freezing target of the scaled process (B2: none).
  const std::vector<double>& target() const { return target_; }
  std::vector<double> center() const;
  // Sigma without the factor t (B3 uses Sigma_D).
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  void describe(VerificationReport& report) const;

 private:
  Regime(RegimeKind kind, RootSystemSpec spec, double t);
  RegimeKind kind_;
  RootSystemSpec spec_;
  double t_;
  std::vector<double> target_;
  Eigen::MatrixXd sigma_;
};

// Statistics (a) |mean| <= mean_se_factor sqrt(tr(cov)/count),
// (b) |C_hat - cov|_F / |cov|_F < covariance_tolerance,
// (c) KS p of the squared Mahalanobis norms (whitened by cov) against
//     chi^2_n, (d) per-coordinate KS p against N(0, cov_jj),
// for rows that are already centred. Throws InvalidArgument when there are
// fewer than 1000 rows or the empirical covariance is singular.
VerificationReport gaussian_fit_check(const std::string& name, const Eigen::MatrixXd& centered,
                                      const Eigen::MatrixXd& cov, const VerifierConfig& cfg = {});

// Monte Carlo standard deviation of the Frobenius relative error of a
// sample covariance of `count` Gaussian vectors with covariance `cov`.
double covariance_error_noise(const Eigen::MatrixXd& cov, std::size_t count);

// max_i |mean(X_i / scale) - target_i| and the lln_quantile of
// |X / scale - target|_inf, both below lln_tolerance. Regimes A, B1, B3, D.
VerificationReport lln_check(const Regime& regime, const SampleBatch& batch,
                             const VerifierConfig& cfg = {});

// Gaussian fluctuation limit for regimes A, B1 and D: the batch is centred
// by regime.center() and compared with N(0, t Sigma).
VerificationReport clt_gaussian_check(const Regime& regime, const SampleBatch& batch,
                                      const VerifierConfig& cfg = {});

// Two-sample comparison: per-coordinate KS and the energy permutation test,
// all p > p_threshold.
VerificationReport two_sample_check(const std::string& name, const Eigen::MatrixXd& a,
                                    const Eigen::MatrixXd& b, const VerifierConfig& cfg = {});

// batch_b from B(n, k1, k2) at time t, shifted by -sqrt(2 t k1) 1, against
// batch_a from A(n, k2) at time t/2.
VerificationReport clt_typeA_limit_check(int n, double k2, double k1, double t,
                                         const SampleBatch& batch_b, const SampleBatch& batch_a,
                                         const VerifierConfig& cfg = {});

// Regimes B3 (including B0) and D. The last coordinate is replaced by its
// absolute value and the batch is centred by sqrt(m t) r_D. Passes when
// (a) no point breaks the chamber constraint on the last coordinate,
// (b) the last coordinate passes a half-normal KS test with variance
// t (Sigma_D)_nn and (c) the first n-1 coordinates pass the chi-square and
// marginal KS tests of gaussian_fit_check; its mean and covariance
// statistics are reported but not required. For B3 the statistic
// wall_law_ks_p tests y_n^2 / v against chi^2_{2 k1 + 1}.
VerificationReport one_sided_check(const Regime& regime, const SampleBatch& batch,
                                   const VerifierConfig& cfg = {});

struct SdeSettings {
  int steps = 0;
  std::size_t paths = kDefaultPaths;
  std::uint64_t seed = 0;
  double wall_buffer = 1e-6;
  double clip = kDriftClip;
};

// Draw x0 ~ mu per path, run the SDE for B(n, nu beta, beta) and apply
// clt_gaussian_check for regime B1.
VerificationReport start_distribution_check(int n, double nu, double beta, double t,
                                            const StartDistribution& mu,
                                            const SdeSettings& sde = {},
                                            const VerifierConfig& cfg = {});

// Optional: one_sided_check for B(n, k1, k2) endpoints of the SDE started
// from mu. Not part of the default suites.
VerificationReport one_sided_start_check(int n, double k1, double k2, double t,
                                         const StartDistribution& mu,
                                         const SdeSettings& sde = {},
                                         const VerifierConfig& cfg = {});

// Covariance error of clt_gaussian_check along increasing k at a fixed
// sample count: passes when err(k_last) <= err(k_first) + 2 noise.
VerificationReport covariance_error_trend(int n, std::vector<double> ks, double t,
                                          std::size_t count, std::uint64_t seed,
                                          const VerifierConfig& cfg = {});

}  // namespace freeze
