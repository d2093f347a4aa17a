#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "freeze/equilibria.hpp"
#include "freeze/report.hpp"
#include "freeze/root_system.hpp"

namespace freeze {

// Precision matrix S = Sigma^{-1} of a freezing CLT, with its Cholesky factor.
//
// A:    s_ii = 1 + sum_{l != i} (z_i - z_l)^{-2},  s_ij = -(z_i - z_j)^{-2}.
// B(nu): s_ii = 1 + 2 nu / r_i^2 + 2 sum_{l != i} [(r_i - r_l)^{-2} + (r_i + r_l)^{-2}],
//        s_ij = 2 (r_i + r_j)^{-2} - 2 (r_i - r_j)^{-2}.
// D:    the B form without the nu term, over the D-type equilibrium.
struct PrecisionMatrix {
  RootKind kind;
  int n;
  double nu;
  Eigen::MatrixXd entries;
  Eigen::MatrixXd chol;  // lower triangular, entries = chol * chol^T
  double det;
  double log_det;
};

// B requests with nu = 0 produce the D matrix.
PrecisionMatrix precision_matrix(const TargetRequest& request);

// Sigma = S^{-1}.
Eigen::MatrixXd covariance(const PrecisionMatrix& precision);

// det S against n! (A) or n! 2^n (B); passes when the relative error < 1e-8.
// There is no closed form for D, so D requests are rejected.
VerificationReport determinant_identity(const TargetRequest& request);

enum class ConstantFamily { CA, CB, CD, TildeA, TildeB };
ConstantFamily parse_constant_family(const std::string& text);
std::string to_string(ConstantFamily family);

struct ConstantParams {
  int n = 1;
  double k = 0.0;   // cA, cD, tildeA
  double k1 = 0.0;  // cB
  double k2 = 0.0;  // cB
  double nu = 1.0;  // tildeB
  double beta = 1.0;  // tildeB
  std::vector<double> x;  // tildeB starting point; empty means the origin
};

struct NormalizationConstant {
  ConstantFamily family;
  double log_value;
};

// Log of the Gaussian-weighted chamber integral constants (cA, cB, cD) and of
// the y-independent prefactors that appear when the start-0 density is
// recentred at the freezing target (tildeA, tildeB).
NormalizationConstant log_norm_constant(ConstantFamily family,
                                        const ConstantParams& params);

double log_c_a(int n, double k);
double log_c_b(int n, double k1, double k2);
double log_c_d(int n, double k);
double log_tilde_c_a(int n, double k);
double log_tilde_c_b(int n, double nu, double beta, double x_squared_norm);

// Closed-form large-multiplicity limits of the two prefactors.
double log_tilde_c_a_limit(int n);
double log_tilde_c_b_limit(int n, double x_squared_norm);

enum class ProofConstant { TildeA, TildeB };

// Tracks the prefactor along `grid` (multiplicity k for A, beta for B) and
// compares it with its limit. Passes when the error at the largest grid value
// is < 5e-3 and errors do not increase along the grid.
VerificationReport proof_constant_limit(ProofConstant family, int n,
                                        double nu = 1.0,
                                        std::span<const double> x = {},
                                        std::vector<double> grid = {10.0, 100.0, 1000.0, 2000.0});

// Large-beta limit of the type B Bessel function along the ray sqrt(beta) x:
// exp(|x|^2 |y|^2 / (4 n (nu + n - 1))).
double bessel_limit_b1(std::span<const double> x, std::span<const double> y,
                       double nu);

// Type A Bessel function with constant second argument y = c(1,...,1):
// J_k(x, c 1) = exp(c sum x_i), independent of k. Throws when y is not constant.
double bessel_a_on_diagonal_ray(std::span<const double> x,
                                std::span<const double> y, double k);

// Gaussian approximation of X_{t,k} started at 0 in the freezing regime:
// center sqrt(scale t) * target, covariance t Sigma. The scale is 2k for A,
// k2 for B (with nu = k1/k2, the D-type equilibrium when k1 = 0) and k for D.
struct LimitGaussian {
  TargetRequest request;
  double scale;
  std::vector<double> center;
  PrecisionMatrix precision;
  Eigen::MatrixXd covariance;  // t Sigma
};

// Requires a positive pair multiplicity.
LimitGaussian limit_gaussian(const RootSystemSpec& spec, double t);

}  // namespace freeze
