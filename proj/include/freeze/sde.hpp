#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "freeze/random.hpp"
#include "freeze/report.hpp"
#include "freeze/root_system.hpp"
#include "freeze/sample_batch.hpp"

namespace freeze {

// Law of the starting point: a point mass, the uniform law on a box
// intersected with the chamber interior, or a finite weighted mixture.
class StartDistribution {
 public:
  enum class Kind { Point, Uniform, Mixture };

  static StartDistribution point(std::vector<double> x);
  static StartDistribution uniform_box(std::vector<double> lower, std::vector<double> upper);
  static StartDistribution mixture(std::vector<std::vector<double>> atoms,
                                   std::vector<double> weights);

  Kind kind() const { return kind_; }
  std::size_t dim() const;
  std::string describe() const;

  // Throws InvalidArgument if the law is not supported at least `buffer`
  // away from the walls of the chamber of `kind`.
  void validate(RootKind kind, double buffer) const;

  // Uniform draws are rejected until they clear the buffer.
  std::vector<double> draw(RootKind kind, double buffer, Engine& engine) const;

  const std::vector<std::vector<double>>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

 private:
  Kind kind_ = Kind::Point;
  std::vector<std::vector<double>> atoms_;
  std::vector<double> weights_;
  std::vector<double> lower_, upper_;
};

// Smallest distance-like gap to a wall: min over simple roots of <alpha, x>
// with the roots normalised as differences x_i - x_{i+1}, x_n (B) and
// x_{n-1} + x_n (D).
double wall_gap(RootKind kind, std::span<const double> x);

// Default discretisation and the path-step budget. The budget reads the
// FREEZE_BESSEL_BUDGET environment variable when it is set.
inline constexpr int kStepsPerUnitTime = 2000;
inline constexpr std::size_t kDefaultPaths = 20000;
inline constexpr double kDefaultBudget = 2e9;
inline constexpr double kDriftClip = 10.0;
double path_step_budget();

struct SdeConfig {
  RootSystemSpec spec;
  StartDistribution start;
  double t = 1.0;
  int steps = 0;  // total Euler steps on [0, t]; 0 means kStepsPerUnitTime * t
  std::size_t paths = kDefaultPaths;
  std::uint64_t seed = 0;
  double wall_buffer = 1e-6;
  double clip = kDriftClip;
  // Each step's Gaussian increment is the normalised sum of this many
  // draws. A run with (steps, 2m) then sees the same Brownian path as a run
  // with (2 steps, m) under the same seed, which couples step-halving
  // comparisons.
  int noise_substeps = 1;

  int resolved_steps() const;
};

// First-order coefficients of the generator:
// A: k sum_{j != i} 1/(x_i - x_j),
// B: k2 sum_{j != i} [1/(x_i - x_j) + 1/(x_i + x_j)] + k1/x_i,
// D: k sum_{j != i} [1/(x_i - x_j) + 1/(x_i + x_j)].
// Throws InvalidArgument for points on a wall.
std::vector<double> drift(const RootSystemSpec& spec, const ChamberPoint& x);
void drift_unchecked(const RootSystemSpec& spec, std::span<const double> x, std::span<double> out);

// Euler-Maruyama endpoints: x <- x + clip(drift) h + sqrt(h) xi then
// projection to the chamber, with each drift coordinate clipped to
// clip/sqrt(h). Paths that produce a NaN are dropped and counted in
// diagnostics.aborted_paths. Paths are processed in blocks of 1024;
// block c uses make_engine(seed, c).
SampleBatch simulate_endpoints(const SdeConfig& cfg);

// Endpoints from x0 versus endpoints from x0 + c 1 shifted back by c (an
// independent seed stream). Passes when every coordinate's two-sample KS
// test and the energy test have p > 0.01.
VerificationReport translation_invariance_check(int n, double k, double t, double c,
                                                std::span<const double> x0, std::uint64_t seed,
                                                std::size_t paths = kDefaultPaths, int steps = 0);

}  // namespace freeze
