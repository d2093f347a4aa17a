#include "freeze/gaussian_limits.hpp"

#include <cmath>
#include <numbers>

#include "freeze/error.hpp"

namespace freeze {

namespace {

constexpr double kDeterminantTolerance = 1e-8;
constexpr double kProofConstantTolerance = 5e-3;
// Errors along the grid may tie at rounding level (n = 1 is exact).
constexpr double kMonotoneSlack = 1e-13;

double log_factorial(int n) { return std::lgamma(n + 1.0); }

double sum_j_log_j(int n) {
  double s = 0.0;
  for (int j = 2; j <= n; ++j) s += j * std::log(static_cast<double>(j));
  return s;
}

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

PrecisionMatrix precision_matrix(const TargetRequest& request) {
  const FreezingTarget target = freezing_target(request);
  const int n = target.n;
  const auto& r = target.coords;
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n);
  if (target.kind == RootKind::A) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double inv = 1.0 / ((r[i] - r[j]) * (r[i] - r[j]));
        s(i, i) += inv;
        s(i, j) = -inv;
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      if (target.nu > 0.0) s(i, i) += 2.0 * target.nu / (r[i] * r[i]);
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double minus = 1.0 / ((r[i] - r[j]) * (r[i] - r[j]));
        const double plus = 1.0 / ((r[i] + r[j]) * (r[i] + r[j]));
        s(i, i) += 2.0 * (minus + plus);
        s(i, j) = 2.0 * plus - 2.0 * minus;
      }
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    throw RuntimeAbort("precision matrix is not positive definite");
  }
  Eigen::MatrixXd chol = llt.matrixL();
  double log_det = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(chol(i, i) > 0.0)) throw RuntimeAbort("non-positive Cholesky pivot");
    log_det += 2.0 * std::log(chol(i, i));
  }
  return {target.kind, n, target.nu, std::move(s), std::move(chol),
          std::exp(log_det), log_det};
}

Eigen::MatrixXd covariance(const PrecisionMatrix& precision) {
  const int n = precision.n;
  // S^{-1} = L^{-T} L^{-1}.
  const Eigen::MatrixXd l_inv = precision.chol.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd::Identity(n, n));
  Eigen::MatrixXd sigma = l_inv.transpose() * l_inv;
  return 0.5 * (sigma + sigma.transpose());
}

VerificationReport determinant_identity(const TargetRequest& request) {
  require(request.kind != RootKind::D,
          "no closed-form determinant identity for D; use precision_matrix");
  require(request.kind != RootKind::B || request.nu > 0.0,
          "the B determinant identity requires nu > 0");
  const PrecisionMatrix p = precision_matrix(request);
  const int n = request.n;
  double log_expected = log_factorial(n);
  if (request.kind == RootKind::B) log_expected += n * std::log(2.0);
  const double expected = std::exp(log_expected);

  VerificationReport report;
  report.name = request.kind == RootKind::A ? "determinant_identity/A"
                                            : "determinant_identity/B";
  report.param("n", n);
  if (request.kind == RootKind::B) report.param("nu", request.nu);
  const double rel = std::abs(p.det - expected) / expected;
  report.statistics["det"] = p.det;
  report.statistics["expected"] = expected;
  report.statistics["rel_error"] = rel;
  report.tolerances["rel_error"] = kDeterminantTolerance;
  report.pass = rel < kDeterminantTolerance;
  return report;
}

ConstantFamily parse_constant_family(const std::string& text) {
  if (text == "cA") return ConstantFamily::CA;
  if (text == "cB") return ConstantFamily::CB;
  if (text == "cD") return ConstantFamily::CD;
  if (text == "tildeA") return ConstantFamily::TildeA;
  if (text == "tildeB") return ConstantFamily::TildeB;
  throw InvalidArgument("unknown constant family '" + text + "'");
}

std::string to_string(ConstantFamily family) {
  switch (family) {
    case ConstantFamily::CA: return "cA";
    case ConstantFamily::CB: return "cB";
    case ConstantFamily::CD: return "cD";
    case ConstantFamily::TildeA: return "tildeA";
    case ConstantFamily::TildeB: return "tildeB";
  }
  return "?";
}

double log_c_a(int n, double k) {
  require(n >= 1 && k >= 0.0 && std::isfinite(k), "cA: need n >= 1 and k >= 0");
  double acc = log_factorial(n) - 0.5 * n * std::log(2.0 * std::numbers::pi);
  for (int j = 1; j <= n; ++j) acc += std::lgamma(1.0 + k) - std::lgamma(1.0 + j * k);
  return acc;
}

double log_c_b(int n, double k1, double k2) {
  require(n >= 1 && k1 >= 0.0 && k2 >= 0.0 && std::isfinite(k1) && std::isfinite(k2),
          "cB: need n >= 1 and k1, k2 >= 0");
  double acc = log_factorial(n) - n * (k1 + (n - 1) * k2 - 0.5) * std::log(2.0);
  for (int j = 1; j <= n; ++j) {
    acc += std::lgamma(1.0 + k2) - std::lgamma(1.0 + j * k2) -
           std::lgamma(0.5 + k1 + (j - 1) * k2);
  }
  return acc;
}

double log_c_d(int n, double k) {
  require(n >= 2 && k >= 0.0 && std::isfinite(k), "cD: need n >= 2 and k >= 0");
  double acc = log_factorial(n) - (n * (n - 1) * k - 0.5 * n + 1.0) * std::log(2.0);
  for (int j = 1; j <= n; ++j) {
    acc += std::lgamma(1.0 + k) - std::lgamma(1.0 + j * k) -
           std::lgamma(0.5 + (j - 1) * k);
  }
  return acc;
}

double log_tilde_c_a(int n, double k) {
  require(k > 0.0, "tildeA: need k > 0");
  return log_c_a(n, k) + 0.5 * k * n * (n - 1) * (std::log(k) - 1.0) +
         k * sum_j_log_j(n);
}

double log_tilde_c_b(int n, double nu, double beta, double x_squared_norm) {
  require(nu > 0.0 && beta > 0.0, "tildeB: need nu > 0 and beta > 0");
  double potential_max = n * (n + nu - 1.0) * (-1.0 + std::log(2.0)) + sum_j_log_j(n);
  for (int j = 1; j <= n; ++j) {
    const double a = nu + j - 1.0;
    potential_max += a * std::log(a);
  }
  return log_c_b(n, nu * beta, beta) + beta * potential_max +
         (nu * beta * n + beta * n * (n - 1)) * std::log(beta) - 0.5 * x_squared_norm;
}

double log_tilde_c_a_limit(int n) {
  return 0.5 * log_factorial(n) - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

double log_tilde_c_b_limit(int n, double x_squared_norm) {
  return -0.5 * x_squared_norm + 0.5 * n * std::log(2.0) + log_tilde_c_a_limit(n);
}

NormalizationConstant log_norm_constant(ConstantFamily family,
                                        const ConstantParams& p) {
  switch (family) {
    case ConstantFamily::CA: return {family, log_c_a(p.n, p.k)};
    case ConstantFamily::CB: return {family, log_c_b(p.n, p.k1, p.k2)};
    case ConstantFamily::CD: return {family, log_c_d(p.n, p.k)};
    case ConstantFamily::TildeA: return {family, log_tilde_c_a(p.n, p.k)};
    case ConstantFamily::TildeB:
      require(p.x.empty() || static_cast<int>(p.x.size()) == p.n,
              "tildeB: x must have n coordinates");
      return {family, log_tilde_c_b(p.n, p.nu, p.beta, squared_norm(p.x))};
  }
  throw InvalidArgument("unknown constant family");
}

VerificationReport proof_constant_limit(ProofConstant family, int n, double nu,
                                        std::span<const double> x,
                                        std::vector<double> grid) {
  require(n >= 1 && n <= 8, "proof_constant_limit: n must be in [1, 8]");
  require(!grid.empty(), "proof_constant_limit: empty grid");
  require(x.empty() || static_cast<int>(x.size()) == n,
          "proof_constant_limit: x must have n coordinates");
  const double xx = squared_norm(x);
  const bool is_a = family == ProofConstant::TildeA;
  const double log_limit = is_a ? log_tilde_c_a_limit(n) : log_tilde_c_b_limit(n, xx);

  VerificationReport report;
  report.name = is_a ? "proof_constant/tildeA" : "proof_constant/tildeB";
  report.param("n", n);
  if (!is_a) {
    report.param("nu", nu);
    report.param("x_squared_norm", xx);
  }
  report.statistics["limit"] = std::exp(log_limit);

  bool monotone = true;
  double previous = 0.0;
  double last = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double m = grid[i];
    const double log_value = is_a ? log_tilde_c_a(n, m) : log_tilde_c_b(n, nu, m, xx);
    if (!std::isfinite(log_value)) throw RuntimeAbort("proof constant overflowed");
    const double rel = std::abs(std::expm1(log_value - log_limit));
    const std::string tag = format_number(m);
    report.statistics["value@" + tag] = std::exp(log_value);
    report.statistics["rel_error@" + tag] = rel;
    if (i > 0 && rel > previous + kMonotoneSlack) monotone = false;
    previous = rel;
    last = rel;
  }
  report.statistics["monotone"] = monotone ? 1.0 : 0.0;
  report.tolerances["rel_error_at_largest"] = kProofConstantTolerance;
  report.pass = monotone && last < kProofConstantTolerance;
  return report;
}

double bessel_limit_b1(std::span<const double> x, std::span<const double> y,
                       double nu) {
  require(x.size() == y.size() && !x.empty(), "bessel_limit_b1: dimension mismatch");
  require(nu > 0.0, "bessel_limit_b1: nu must be > 0");
  const double n = static_cast<double>(x.size());
  return std::exp(squared_norm(x) * squared_norm(y) / (4.0 * n * (nu + n - 1.0)));
}

double bessel_a_on_diagonal_ray(std::span<const double> x,
                                std::span<const double> y, double k) {
  require(x.size() == y.size() && !x.empty(),
          "bessel_a_on_diagonal_ray: dimension mismatch");
  require(k >= 0.0, "bessel_a_on_diagonal_ray: k must be >= 0");
  const double c = y[0];
  for (double v : y) {
    require(v == c, "bessel_a_on_diagonal_ray: second argument must be constant");
  }
  double sum = 0.0;
  for (double v : x) sum += v;
  return std::exp(c * sum);
}

LimitGaussian limit_gaussian(const RootSystemSpec& spec, double t) {
  require(std::isfinite(t) && t > 0.0, "time must be > 0");
  require(spec.k() > 0.0, "the limit Gaussian needs a positive pair multiplicity");
  TargetRequest request = TargetRequest::A(spec.n());
  double scale = 2.0 * spec.k();
  if (spec.kind() == RootKind::B) {
    request = TargetRequest::B(spec.n(), spec.k1() / spec.k2());
    scale = spec.k2();
  } else if (spec.kind() == RootKind::D) {
    request = TargetRequest::D(spec.n());
    scale = spec.k();
  }
  const FreezingTarget target = freezing_target(request);
  PrecisionMatrix precision = precision_matrix(request);
  std::vector<double> center(target.coords.size());
  for (std::size_t i = 0; i < center.size(); ++i) {
    center[i] = std::sqrt(scale * t) * target.coords[i];
  }
  Eigen::MatrixXd cov = t * covariance(precision);
  return {request, scale, std::move(center), std::move(precision), std::move(cov)};
}

}  // namespace freeze
