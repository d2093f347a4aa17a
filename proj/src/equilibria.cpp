#include "freeze/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "freeze/error.hpp"
#include "freeze/tridiagonal.hpp"

namespace freeze {

namespace {

constexpr double kIdentityTolerance = 1e-9;

// Jacobi matrix of a monic three-term recurrence
//   x p_j = p_{j+1} + diag_j p_j + offdiag_{j-1}^2 p_{j-1}.
struct JacobiMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;
};

JacobiMatrix hermite_jacobi(int n) {
  JacobiMatrix j{std::vector<double>(n, 0.0), std::vector<double>(n - 1)};
  for (int i = 0; i + 1 < n; ++i) j.offdiag[i] = std::sqrt(0.5 * (i + 1));
  return j;
}

JacobiMatrix laguerre_jacobi(int n, double alpha) {
  JacobiMatrix j{std::vector<double>(n), std::vector<double>(n - 1)};
  for (int i = 0; i < n; ++i) j.diag[i] = 2.0 * i + alpha + 1.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double m = i + 1.0;
    j.offdiag[i] = std::sqrt(m * (m + alpha));
  }
  return j;
}

// Degree-n polynomial of the orthonormal family (up to a constant factor)
// and its derivative at x. Orthonormal scaling keeps values moderate.
std::pair<double, double> orthonormal_value(const JacobiMatrix& jac, double x) {
  const std::size_t n = jac.diag.size();
  double p_prev = 0.0, p = 1.0;
  double dp_prev = 0.0, dp = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double b_prev = j == 0 ? 0.0 : jac.offdiag[j - 1];
    const double b_next = j + 1 < n ? jac.offdiag[j] : 1.0;
    const double p_next = ((x - jac.diag[j]) * p - b_prev * p_prev) / b_next;
    const double dp_next = ((x - jac.diag[j]) * dp + p - b_prev * dp_prev) / b_next;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
  }
  return {p, dp};
}

std::vector<double> polished_zeros(const JacobiMatrix& jac) {
  std::vector<double> zeros = tridiagonal_eigenvalues(jac.diag, jac.offdiag);
  for (double& x : zeros) {
    const auto [p, dp] = orthonormal_value(jac, x);
    if (dp != 0.0 && std::isfinite(p / dp)) x -= p / dp;
  }
  std::sort(zeros.begin(), zeros.end(), std::greater<>());
  return zeros;
}

double sum_j_log_j(int n) {
  double s = 0.0;
  for (int j = 2; j <= n; ++j) s += j * std::log(static_cast<double>(j));
  return s;
}

double squared_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

VerificationReport identity_report(const std::string& name, int n, double lhs,
                                   double rhs) {
  VerificationReport report;
  report.name = name;
  report.param("n", n);
  report.statistics["lhs"] = lhs;
  report.statistics["rhs"] = rhs;
  report.statistics["abs_error"] = std::abs(lhs - rhs);
  report.tolerances["abs_error"] = kIdentityTolerance;
  report.pass = std::abs(lhs - rhs) < kIdentityTolerance;
  return report;
}

}  // namespace

std::vector<double> hermite_zeros(int n) {
  require(n >= 1, "hermite_zeros: n must be >= 1");
  std::vector<double> z = polished_zeros(hermite_jacobi(n));
  // Exact antisymmetry z_i = -z_{n+1-i}.
  for (int i = 0; i < n / 2; ++i) {
    const double m = 0.5 * (z[i] - z[n - 1 - i]);
    z[i] = m;
    z[n - 1 - i] = -m;
  }
  if (n % 2 == 1) z[n / 2] = 0.0;
  return z;
}

std::vector<double> laguerre_zeros(int n, double alpha) {
  require(n >= 1, "laguerre_zeros: n must be >= 1");
  require(std::isfinite(alpha) && alpha > -1.0, "laguerre_zeros: alpha must be > -1");
  return polished_zeros(laguerre_jacobi(n, alpha));
}

std::vector<double> laguerre_minus_one_zeros(int n) {
  require(n >= 1, "laguerre_minus_one_zeros: n must be >= 1");
  std::vector<double> z;
  if (n > 1) z = laguerre_zeros(n - 1, 1.0);
  z.push_back(0.0);
  return z;
}

double hermite_value(int n, double x) {
  double prev = 1.0, cur = 2.0 * x;
  if (n == 0) return prev;
  for (int j = 1; j < n; ++j) {
    const double next = 2.0 * x * cur - 2.0 * j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double laguerre_value(int n, double alpha, double x) {
  double prev = 1.0, cur = 1.0 + alpha - x;
  if (n == 0) return prev;
  for (int j = 1; j < n; ++j) {
    const double next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::string to_string(ZeroSource source) {
  switch (source) {
    case ZeroSource::HermiteZeros: return "hermite";
    case ZeroSource::LaguerreZerosScaled: return "laguerre";
    case ZeroSource::LaguerreMinusOneScaled: return "laguerre-1";
  }
  return "?";
}

FreezingTarget freezing_target(const TargetRequest& request) {
  require(request.n >= 1, "freezing_target: n must be >= 1");
  FreezingTarget target{request.kind, request.n, 0.0, {}, ZeroSource::HermiteZeros, 0.0};
  switch (request.kind) {
    case RootKind::A:
      target.coords = hermite_zeros(request.n);
      return target;
    case RootKind::B:
      require(std::isfinite(request.nu) && request.nu >= 0.0,
              "freezing_target: nu must be >= 0 for B");
      if (request.nu > 0.0) {
        target.nu = request.nu;
        target.alpha = request.nu - 1.0;
        target.source = ZeroSource::LaguerreZerosScaled;
        target.coords = laguerre_zeros(request.n, target.alpha);
        for (double& c : target.coords) c = std::sqrt(2.0 * c);
        return target;
      }
      break;
    case RootKind::D:
      require(request.n >= 2, "freezing_target: D requires n >= 2");
      break;
  }
  target.alpha = -1.0;
  target.source = ZeroSource::LaguerreMinusOneScaled;
  target.coords = laguerre_minus_one_zeros(request.n);
  for (double& c : target.coords) c = std::sqrt(2.0 * c);
  return target;
}

double stationarity_residual(const FreezingTarget& target) {
  const auto& r = target.coords;
  const int n = static_cast<int>(r.size());
  double worst = 0.0;
  if (target.kind == RootKind::A) {
    for (int i = 0; i < n; ++i) {
      const double yi = std::sqrt(2.0) * r[i];
      double rhs = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) rhs += 1.0 / (yi - std::sqrt(2.0) * r[j]);
      }
      worst = std::max(worst, std::abs(0.5 * yi - rhs));
    }
    return worst;
  }
  if (target.source == ZeroSource::LaguerreZerosScaled) {
    for (int i = 0; i < n; ++i) {
      double rhs = target.nu / r[i];
      for (int j = 0; j < n; ++j) {
        if (j != i) rhs += 1.0 / (r[i] - r[j]) + 1.0 / (r[i] + r[j]);
      }
      worst = std::max(worst, std::abs(0.5 * r[i] - rhs));
    }
    return worst;
  }
  for (int i = 0; i + 1 < n; ++i) {
    double lhs = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) lhs += 4.0 / ((r[i] - r[j]) * (r[i] + r[j]));
    }
    worst = std::max(worst, std::abs(lhs - 1.0));
  }
  return std::max(worst, std::abs(r[n - 1]));
}

PotentialIdentity parse_potential_identity(const std::string& text) {
  if (text == "A_at_half") return PotentialIdentity::AAtHalf;
  if (text == "B_full") return PotentialIdentity::BFull;
  if (text == "B_norm") return PotentialIdentity::BNorm;
  if (text == "A_sumsq") return PotentialIdentity::ASumSquares;
  throw InvalidArgument("unknown potential identity '" + text + "'");
}

std::string to_string(PotentialIdentity identity) {
  switch (identity) {
    case PotentialIdentity::AAtHalf: return "A_at_half";
    case PotentialIdentity::BFull: return "B_full";
    case PotentialIdentity::BNorm: return "B_norm";
    case PotentialIdentity::ASumSquares: return "A_sumsq";
  }
  return "?";
}

VerificationReport potential_identity_check(PotentialIdentity identity, int n,
                                            double nu) {
  require(n >= 1, "potential_identity_check: n must be >= 1");
  const double pairs = 0.5 * n * (n - 1);
  const std::string name = "potential_identity/" + to_string(identity);
  switch (identity) {
    case PotentialIdentity::AAtHalf: {
      const auto z = hermite_zeros(n);
      double lhs = -squared_norm(z);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) lhs += 2.0 * std::log(z[i] - z[j]);
      }
      const double rhs = -pairs * (1.0 + std::log(2.0)) + sum_j_log_j(n);
      return identity_report(name, n, lhs, rhs);
    }
    case PotentialIdentity::ASumSquares: {
      return identity_report(name, n, squared_norm(hermite_zeros(n)), pairs);
    }
    case PotentialIdentity::BFull:
    case PotentialIdentity::BNorm:
      break;
  }
  require(std::isfinite(nu) && nu > 0.0, "B identities require nu > 0");
  const auto r = freezing_target(TargetRequest::B(n, nu)).coords;
  VerificationReport report;
  if (identity == PotentialIdentity::BNorm) {
    report = identity_report(name, n, squared_norm(r), 2.0 * n * (n + nu - 1.0));
  } else {
    double lhs = -0.5 * squared_norm(r);
    for (int i = 0; i < n; ++i) {
      lhs += nu * std::log(r[i] * r[i]);
      for (int j = i + 1; j < n; ++j) {
        lhs += 2.0 * std::log((r[i] - r[j]) * (r[i] + r[j]));
      }
    }
    double rhs = n * (n + nu - 1.0) * (-1.0 + std::log(2.0)) + sum_j_log_j(n);
    for (int j = 1; j <= n; ++j) {
      const double a = nu + j - 1.0;
      rhs += a * std::log(a);
    }
    report = identity_report(name, n, lhs, rhs);
  }
  report.param("nu", nu);
  return report;
}

double potential_identity_a_discrepancy(int n, double t) {
  require(t > 0.0, "t must be > 0");
  const auto z = hermite_zeros(n);
  double lhs = -squared_norm(z) / (2.0 * t);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) lhs += 2.0 * std::log(z[i] - z[j]);
  }
  const double rhs = -0.5 * n * (n - 1) * (1.0 - std::log(t)) + sum_j_log_j(n);
  return lhs - rhs;
}

}  // namespace freeze
