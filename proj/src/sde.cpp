#include "freeze/sde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

#include "freeze/error.hpp"
#include "freeze/parallel.hpp"
#include "freeze/stats.hpp"

namespace freeze {

StartDistribution StartDistribution::point(std::vector<double> x) {
  StartDistribution s;
  s.kind_ = Kind::Point;
  s.atoms_.push_back(std::move(x));
  s.weights_ = {1.0};
  return s;
}

StartDistribution StartDistribution::uniform_box(std::vector<double> lower,
                                                 std::vector<double> upper) {
  require(!lower.empty() && lower.size() == upper.size(), "box bounds differ in dimension");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    require(std::isfinite(lower[i]) && std::isfinite(upper[i]) && lower[i] < upper[i],
            "box needs finite lower < upper in every coordinate");
  }
  StartDistribution s;
  s.kind_ = Kind::Uniform;
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  return s;
}

StartDistribution StartDistribution::mixture(std::vector<std::vector<double>> atoms,
                                             std::vector<double> weights) {
  require(!atoms.empty() && atoms.size() == weights.size(),
          "mixture needs one weight per atom");
  double total = 0.0;
  for (double w : weights) {
    require(std::isfinite(w) && w > 0.0, "mixture weights must be positive");
    total += w;
  }
  for (double& w : weights) w /= total;
  for (const auto& a : atoms) require(a.size() == atoms.front().size(), "atoms differ in dimension");
  StartDistribution s;
  s.kind_ = Kind::Mixture;
  s.atoms_ = std::move(atoms);
  s.weights_ = std::move(weights);
  return s;
}

std::size_t StartDistribution::dim() const {
  return kind_ == Kind::Uniform ? lower_.size() : atoms_.front().size();
}

std::string StartDistribution::describe() const {
  std::ostringstream out;
  auto vec = [&](const std::vector<double>& v) {
    out << '(';
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << format_number(v[i]);
    out << ')';
  };
  switch (kind_) {
    case Kind::Point:
      out << "point";
      vec(atoms_.front());
      break;
    case Kind::Uniform:
      out << "uniform";
      vec(lower_);
      vec(upper_);
      break;
    case Kind::Mixture:
      out << "mixture";
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        out << (i ? "+" : "") << format_number(weights_[i]) << '*';
        vec(atoms_[i]);
      }
      break;
  }
  return out.str();
}

namespace {
bool clears_buffer(RootKind kind, std::span<const double> x, double buffer) {
  bool origin = std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
  return !origin && in_chamber(kind, x) && wall_gap(kind, x) >= buffer;
}

constexpr int kUniformAttempts = 100000;
}  // namespace

void StartDistribution::validate(RootKind kind, double buffer) const {
  if (kind_ == Kind::Uniform) {
    // Probe with a fixed stream: an empty intersection shows up as no hits.
    Engine engine(0);
    (void)draw(kind, buffer, engine);
    return;
  }
  for (const auto& a : atoms_) {
    require(clears_buffer(kind, a, buffer),
            "starting point must lie inside the chamber, off the origin and at least "
            "wall_buffer from every wall");
  }
}

std::vector<double> StartDistribution::draw(RootKind kind, double buffer, Engine& engine) const {
  if (kind_ == Kind::Point) return atoms_.front();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (kind_ == Kind::Mixture) {
    double u = unit(engine);
    for (std::size_t i = 0; i + 1 < atoms_.size(); ++i) {
      if (u < weights_[i]) return atoms_[i];
      u -= weights_[i];
    }
    return atoms_.back();
  }
  std::vector<double> x(lower_.size());
  for (int attempt = 0; attempt < kUniformAttempts; ++attempt) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = lower_[i] + (upper_[i] - lower_[i]) * unit(engine);
    if (clears_buffer(kind, x, buffer)) return x;
  }
  throw InvalidArgument("uniform start box has (almost) no overlap with the chamber interior");
}

double wall_gap(RootKind kind, std::span<const double> x) {
  const std::size_t n = x.size();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i) gap = std::min(gap, x[i] - x[i + 1]);
  if (kind == RootKind::B && n > 0) gap = std::min(gap, x[n - 1]);
  if (kind == RootKind::D && n >= 2) gap = std::min(gap, x[n - 2] + x[n - 1]);
  return gap;
}

double path_step_budget() {
  if (const char* env = std::getenv("FREEZE_BESSEL_BUDGET")) {
    char* end = nullptr;
    const double value = std::strtod(env, &end);
    require(end != env && *end == '\0' && std::isfinite(value) && value > 0.0,
            "FREEZE_BESSEL_BUDGET must be a positive number");
    return value;
  }
  return kDefaultBudget;
}

int SdeConfig::resolved_steps() const {
  if (steps > 0) return steps;
  return std::max(1, static_cast<int>(std::ceil(kStepsPerUnitTime * t)));
}

void drift_unchecked(const RootSystemSpec& spec, std::span<const double> x, std::span<double> out) {
  const std::size_t n = x.size();
  const double k = spec.k();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double pair = k / (x[i] - x[j]);
      out[i] += pair;
      out[j] -= pair;
      if (spec.kind() != RootKind::A) {
        const double mirror = k / (x[i] + x[j]);
        out[i] += mirror;
        out[j] += mirror;
      }
    }
    if (spec.kind() == RootKind::B && spec.k1() != 0.0) out[i] += spec.k1() / x[i];
  }
}

std::vector<double> drift(const RootSystemSpec& spec, const ChamberPoint& x) {
  require(x.kind() == spec.kind() && x.size() == static_cast<std::size_t>(spec.n()),
          "point does not match the root system");
  require(wall_gap(spec.kind(), x.coords()) > 0.0, "drift is singular on the chamber walls");
  std::vector<double> out(x.size());
  drift_unchecked(spec, x.coords(), out);
  return out;
}

namespace {
constexpr std::size_t kPathBlock = 1024;
}

SampleBatch simulate_endpoints(const SdeConfig& cfg) {
  const RootSystemSpec& spec = cfg.spec;
  const int n = spec.n();
  require(std::isfinite(cfg.t) && cfg.t > 0.0, "time must be > 0");
  require(cfg.steps >= 0, "steps must be positive");
  require(cfg.paths > 0, "paths must be positive");
  require(std::isfinite(cfg.wall_buffer) && cfg.wall_buffer > 0.0, "wall_buffer must be > 0");
  require(std::isfinite(cfg.clip) && cfg.clip > 0.0, "drift clip must be > 0");
  require(cfg.noise_substeps >= 1, "noise_substeps must be >= 1");
  require(cfg.start.dim() == static_cast<std::size_t>(n), "start law has the wrong dimension");
  const int steps = cfg.resolved_steps();
  const double budget = path_step_budget();
  if (static_cast<double>(steps) * static_cast<double>(cfg.paths) > budget) {
    throw InvalidArgument("steps x paths = " +
                          format_number(static_cast<double>(steps) * cfg.paths) +
                          " exceeds the path-step budget " + format_number(budget) +
                          " (FREEZE_BESSEL_BUDGET)");
  }
  cfg.start.validate(spec.kind(), cfg.wall_buffer);

  const double h = cfg.t / steps;
  const double root_h = std::sqrt(h);
  const double cap = cfg.clip / root_h;
  const int sub = cfg.noise_substeps;
  const double sub_scale = 1.0 / std::sqrt(static_cast<double>(sub));
  const std::size_t blocks = (cfg.paths + kPathBlock - 1) / kPathBlock;
  std::vector<std::vector<double>> block_points(blocks);
  std::vector<std::size_t> block_aborted(blocks, 0);

  parallel_for(blocks, [&](std::size_t b) {
    Engine engine = make_engine(cfg.seed, b);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t first = b * kPathBlock;
    const std::size_t len = std::min(kPathBlock, cfg.paths - first);
    std::vector<double> x, mu(n), xi(n);
    auto& out = block_points[b];
    out.reserve(len * n);
    for (std::size_t p = 0; p < len; ++p) {
      x = cfg.start.draw(spec.kind(), cfg.wall_buffer, engine);
      bool finite = true;
      for (int s = 0; s < steps; ++s) {
        drift_unchecked(spec, x, mu);
        for (int i = 0; i < n; ++i) xi[i] = 0.0;
        for (int r = 0; r < sub; ++r) {
          for (int i = 0; i < n; ++i) xi[i] += normal(engine);
        }
        for (int i = 0; i < n; ++i) {
          const double d = std::clamp(mu[i], -cap, cap);
          x[i] += d * h + root_h * sub_scale * xi[i];
        }
        if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) {
          finite = false;
          break;
        }
        project_in_place(spec.kind(), x);
      }
      if (finite) {
        out.insert(out.end(), x.begin(), x.end());
      } else {
        ++block_aborted[b];
      }
    }
  });

  SampleBatch batch(spec, cfg.t, SamplerMethod::EulerMaruyama, cfg.seed);
  for (const auto& pts : block_points) {
    batch.data().insert(batch.data().end(), pts.begin(), pts.end());
  }
  batch.diagnostics.aborted_paths = std::accumulate(block_aborted.begin(), block_aborted.end(),
                                                    std::size_t{0});
  batch.diagnostics.effective_sample_size = static_cast<double>(batch.count());
  if (batch.count() == 0) throw RuntimeAbort("every SDE path produced a NaN");
  batch.parameters["start"] = cfg.start.describe();
  batch.parameters["steps"] = std::to_string(steps);
  batch.parameters["paths"] = std::to_string(cfg.paths);
  batch.parameters["wall_buffer"] = format_number(cfg.wall_buffer);
  batch.parameters["clip"] = format_number(cfg.clip);
  batch.parameters["noise_substeps"] = std::to_string(sub);
  return batch;
}

VerificationReport translation_invariance_check(int n, double k, double t, double c,
                                                std::span<const double> x0, std::uint64_t seed,
                                                std::size_t paths, int steps) {
  require(x0.size() == static_cast<std::size_t>(n), "x0 has the wrong dimension");
  require(std::isfinite(c), "shift must be finite");
  const RootSystemSpec spec = RootSystemSpec::A(n, k);
  std::vector<double> start(x0.begin(), x0.end());
  std::vector<double> shifted = start;
  for (double& v : shifted) v += c;

  SdeConfig cfg{spec, StartDistribution::point(start), t, steps, paths, seed};
  const SampleBatch base = simulate_endpoints(cfg);
  cfg.start = StartDistribution::point(shifted);
  cfg.seed = derive_seed(seed, 1);
  SampleBatch moved = simulate_endpoints(cfg);
  for (double& v : moved.data()) v -= c;

  VerificationReport report;
  report.name = "translation_invariance";
  report.param("n", n);
  report.param("k", k);
  report.param("t", t);
  report.param("c", c);
  report.param("seed", std::to_string(seed));
  report.param("paths", static_cast<int>(paths));
  report.param("steps", cfg.resolved_steps());
  report.tolerances["p_min"] = 0.01;
  double ks_min = 1.0;
  for (int j = 0; j < n; ++j) {
    const auto r = stats::ks_two_sample(stats::column(base.data(), n, j),
                                        stats::column(moved.data(), n, j));
    report.statistics["ks_p_x" + std::to_string(j + 1)] = r.p_value;
    ks_min = std::min(ks_min, r.p_value);
  }
  const auto energy = stats::energy_test(base.to_matrix(), moved.to_matrix(), 200,
                                         derive_seed(seed, 2));
  report.statistics["energy_statistic"] = energy.statistic;
  report.statistics["energy_p"] = energy.p_value;
  report.statistics["aborted_paths"] =
      static_cast<double>(base.diagnostics.aborted_paths + moved.diagnostics.aborted_paths);
  report.pass = ks_min > 0.01 && energy.p_value > 0.01;
  return report;
}

}  // namespace freeze
