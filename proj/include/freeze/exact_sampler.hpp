#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "freeze/root_system.hpp"
#include "freeze/sample_batch.hpp"

namespace freeze {

// Points are generated in sub-batches of this size; sub-batch c draws from
// make_engine(seed, c), so output does not depend on the thread count.
inline constexpr std::size_t kExactChunk = 1024;

// beta-Hermite model with beta = 2k: symmetric tridiagonal matrix with
// N(0,1) diagonal and chi_{beta(n-i)}/sqrt(2) off-diagonal (i = 1..n-1).
// Its ordered eigenvalues times sqrt(t) have density
// prop. to exp(-|y|^2/(2t)) prod (y_i - y_j)^{2k} on the A chamber.
SampleBatch sample_tridiag_a(int n, double k, double t, std::size_t count,
                             std::uint64_t seed);

// beta-Laguerre model with beta = 2 k2: lower bidiagonal B with diagonal
// chi_{2k1+1+beta(n-1-i)} (i = 0..n-1) and subdiagonal chi_{beta(n-1-i)}
// (i = 0..n-2). With u = sigma(B)^2/2 the u-density is
// prop. to exp(-sum u) prod (u_i - u_j)^{2 k2} prod u_i^{k1-1/2};
// the emitted points are y = sqrt(t) sigma(B).
SampleBatch sample_tridiag_b(int n, double k1, double k2, double t,
                             std::size_t count, std::uint64_t seed);

// Start-0 law for any spec: A and B use the matrix models above, D uses the
// B model with k1 = 0 and a symmetric random sign on the last coordinate.
SampleBatch sample_exact(const RootSystemSpec& spec, double t,
                         std::size_t count, std::uint64_t seed);

// Chains that emit at most this many points each; chain c runs on
// make_engine(seed, c).
inline constexpr std::size_t kChainLength = 5000;
inline constexpr int kBurnIn = 1000;
inline constexpr int kMaxThinning = 1024;
inline constexpr double kLag1Screen = 0.05;

// Metropolis sampler for the start-0 density. IndepMetropolis proposes from
// N(center, inflation t Sigma) of limit_gaussian, folded into the chamber
// (or, for Weyl groups above 5040 elements, rejected outside it).
// RandomWalkMetropolis uses Gaussian steps of size 2.4/sqrt(n) sqrt(t Sigma_ii).
// Throws RuntimeAbort when the acceptance rate falls below 1e-3.
SampleBatch sample_metropolis(const RootSystemSpec& spec, double t,
                              std::size_t count, std::uint64_t seed,
                              double proposal_inflation = 1.5,
                              SamplerMethod method = SamplerMethod::IndepMetropolis);

// Sample autocorrelation at `lag` (biased normalisation).
double autocorrelation(std::span<const double> series, std::size_t lag);

// Geyer's initial positive sequence estimate.
double effective_sample_size(std::span<const double> series);

}  // namespace freeze
