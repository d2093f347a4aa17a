#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace freeze::stats {

// Below this size the asymptotic Kolmogorov law is not trusted.
inline constexpr std::size_t kMinKsCount = 1000;

double normal_cdf(double x, double variance = 1.0);
// |Z| for Z ~ N(0, variance).
double half_normal_cdf(double x, double variance);
double chi_square_cdf(double x, double dof);

// Survival function of the Kolmogorov distribution,
// Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

struct KsResult {
  double statistic;  // sup-distance D
  double p_value;
  double effective_n;
};

// One-sample test against a continuous CDF, p from Q((sqrt(n) + 0.12 +
// 0.11/sqrt(n)) D). Throws InvalidArgument when the sample has fewer than
// kMinKsCount points.
KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);

// Two-sample version with n_eff = n m / (n + m); both samples need
// kMinKsCount points.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct EnergyResult {
  double statistic;  // n m / (n + m) times the energy distance
  double p_value;    // (1 + #{permuted >= observed}) / (1 + permutations)
  int permutations;
  std::size_t used_a;
  std::size_t used_b;
};

// Energy-distance permutation test between the rows of a and b. Samples
// larger than max_points are thinned to an evenly strided subsample so the
// pairwise distance matrix stays small. Permutation r shuffles with
// make_engine(seed, r).
EnergyResult energy_test(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int permutations,
                         std::uint64_t seed, std::size_t max_points = 1000);

// Column j of a row-major n-column buffer.
std::vector<double> column(std::span<const double> rows, int n, int j);

// Empirical q-quantile (linear interpolation between order statistics).
double quantile(std::vector<double> values, double q);

}  // namespace freeze::stats
