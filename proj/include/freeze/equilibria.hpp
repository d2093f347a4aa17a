#pragma once

#include <string>
#include <vector>

#include "freeze/report.hpp"
#include "freeze/root_system.hpp"

namespace freeze {

// Zeros of classical orthogonal polynomials, returned in decreasing order.
// Computed as eigenvalues of the Jacobi matrix of the three-term recurrence,
// then refined by one Newton step on the recurrence-evaluated polynomial.

// Zeros of the Hermite polynomial H_n (weight e^{-x^2}).
std::vector<double> hermite_zeros(int n);
// Zeros of the Laguerre polynomial L_n^{(alpha)}, alpha > -1.
std::vector<double> laguerre_zeros(int n, double alpha);
// Zeros of L_n^{(-1)} = -(x/n) L_{n-1}^{(1)}: the zeros of L_{n-1}^{(1)}, then 0.
std::vector<double> laguerre_minus_one_zeros(int n);

// Classical normalizations via the three-term recurrences.
double hermite_value(int n, double x);
double laguerre_value(int n, double alpha, double x);

enum class ZeroSource { HermiteZeros, LaguerreZerosScaled, LaguerreMinusOneScaled };
std::string to_string(ZeroSource source);

// Which equilibrium to compute: A(n), B(n, nu) or D(n).
struct TargetRequest {
  RootKind kind;
  int n;
  double nu = 0.0;

  static TargetRequest A(int n) { return {RootKind::A, n, 0.0}; }
  static TargetRequest B(int n, double nu) { return {RootKind::B, n, nu}; }
  static TargetRequest D(int n) { return {RootKind::D, n, 0.0}; }
};

// Maximizer of the freezing potential: z for A, r for B and D.
struct FreezingTarget {
  RootKind kind;
  int n;
  double nu;  // B only; 0 selects the D-type equilibrium
  std::vector<double> coords;
  ZeroSource source;
  double alpha;  // Laguerre index used, when applicable
};

// A: Hermite zeros. B (nu > 0): r_i = sqrt(2 z_i) for the zeros of
// L_n^{(nu-1)}. D, and B with nu = 0: r_i = sqrt(2 z_i) over the zeros of
// L_n^{(-1)}, so r_n = 0.
FreezingTarget freezing_target(const TargetRequest& request);

// Largest absolute violation of the equilibrium equations. For A the
// equations are tested at y = sqrt(2) z. For D-type targets the last
// equation is replaced by |r_n|.
double stationarity_residual(const FreezingTarget& target);

enum class PotentialIdentity { AAtHalf, BFull, BNorm, ASumSquares };
PotentialIdentity parse_potential_identity(const std::string& text);
std::string to_string(PotentialIdentity identity);

// Checks one closed-form identity satisfied by the equilibrium; passes when
// |lhs - rhs| < 1e-9. `nu` is read by the B identities only.
VerificationReport potential_identity_check(PotentialIdentity identity, int n,
                                            double nu = 1.0);

// lhs(t) - rhs(t) of the type A potential identity
//   -|z|^2/(2t) + 2 sum ln(z_i - z_j) = -n(n-1)/2 (1 - ln t) + sum j ln j.
// Vanishes at t = 1/2 only.
double potential_identity_a_discrepancy(int n, double t);

}  // namespace freeze
