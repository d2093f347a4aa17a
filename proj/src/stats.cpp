#include "freeze/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>

#include "freeze/error.hpp"
#include "freeze/parallel.hpp"
#include "freeze/random.hpp"

namespace freeze::stats {

double normal_cdf(double x, double variance) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

double half_normal_cdf(double x, double variance) {
  if (x <= 0.0) return 0.0;
  return std::erf(x / std::sqrt(2.0 * variance));
}

double chi_square_cdf(double x, double dof) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(0.5 * dof, 0.5 * x);
}

double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? 1.0 : -1.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {
double ks_p(double d, double n_eff) {
  const double root = std::sqrt(n_eff);
  return kolmogorov_q((root + 0.12 + 0.11 / root) * d);
}
}  // namespace

KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf) {
  require(sample.size() >= kMinKsCount, "KS test needs at least 1000 points");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return {d, ks_p(d, n), n};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require(a.size() >= kMinKsCount && b.size() >= kMinKsCount,
          "two-sample KS test needs at least 1000 points per sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(i / n - j / m));
  }
  const double n_eff = n * m / (n + m);
  return {d, ks_p(d, n_eff), n_eff};
}

namespace {
std::vector<Eigen::Index> strided_rows(Eigen::Index rows, std::size_t max_points) {
  std::vector<Eigen::Index> idx;
  const auto keep = std::min<std::size_t>(rows, max_points);
  for (std::size_t i = 0; i < keep; ++i) {
    idx.push_back(static_cast<Eigen::Index>(i * static_cast<std::size_t>(rows) / keep));
  }
  return idx;
}
}  // namespace

EnergyResult energy_test(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int permutations,
                         std::uint64_t seed, std::size_t max_points) {
  require(a.cols() == b.cols(), "energy test samples differ in dimension");
  require(a.rows() >= 2 && b.rows() >= 2, "energy test needs at least two points per sample");
  require(permutations > 0, "energy test needs a positive permutation count");
  const auto ia = strided_rows(a.rows(), max_points);
  const auto ib = strided_rows(b.rows(), max_points);
  const std::size_t n = ia.size(), m = ib.size(), total = n + m;
  Eigen::MatrixXd pooled(total, a.cols());
  for (std::size_t i = 0; i < n; ++i) pooled.row(i) = a.row(ia[i]);
  for (std::size_t i = 0; i < m; ++i) pooled.row(n + i) = b.row(ib[i]);
  Eigen::MatrixXd dist(total, total);
  for (std::size_t i = 0; i < total; ++i) {
    dist(i, i) = 0.0;
    for (std::size_t j = i + 1; j < total; ++j) {
      dist(i, j) = dist(j, i) = (pooled.row(i) - pooled.row(j)).norm();
    }
  }
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  // With within-group sums S_aa, S_bb and the total S, the cross sum is
  // (S - S_aa - S_bb)/2, so each permutation only needs the group sums.
  double all = 0.0;
  for (std::size_t i = 0; i < total; ++i) all += dist.col(i).sum();
  auto statistic = [&](const std::vector<char>& in_a) {
    double saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      for (std::size_t j = 0; j < total; ++j) {
        if (in_a[i] && in_a[j]) saa += dist(i, j);
        else if (!in_a[i] && !in_a[j]) sbb += dist(i, j);
      }
    }
    const double sab = 0.5 * (all - saa - sbb);
    const double e = 2.0 * sab / (dn * dm) - saa / (dn * dn) - sbb / (dm * dm);
    return dn * dm / (dn + dm) * e;
  };
  std::vector<char> labels(total, 0);
  std::fill(labels.begin(), labels.begin() + n, 1);
  const double observed = statistic(labels);
  std::vector<double> replicate(permutations);
  parallel_for(static_cast<std::size_t>(permutations), [&](std::size_t r) {
    std::vector<char> perm = labels;
    Engine engine = make_engine(seed, r);
    std::shuffle(perm.begin(), perm.end(), engine);
    replicate[r] = statistic(perm);
  });
  const auto exceed = std::count_if(replicate.begin(), replicate.end(),
                                    [&](double v) { return v >= observed; });
  return {observed, (1.0 + exceed) / (1.0 + permutations), permutations, n, m};
}

std::vector<double> column(std::span<const double> rows, int n, int j) {
  std::vector<double> col(rows.size() / n);
  for (std::size_t i = 0; i < col.size(); ++i) col[i] = rows[i * n + j];
  return col;
}

double quantile(std::vector<double> values, double q) {
  require(!values.empty(), "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * (values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - lo) * (values[hi] - values[lo]);
}

}  // namespace freeze::stats
