#include "freeze/exact_sampler.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "freeze/error.hpp"
#include "freeze/gaussian_limits.hpp"
#include "freeze/parallel.hpp"
#include "freeze/random.hpp"
#include "freeze/tridiagonal.hpp"

namespace freeze {

namespace {

void check_count(std::size_t count) { require(count > 0, "count must be positive"); }

void check_time(double t) { require(std::isfinite(t) && t > 0.0, "time must be > 0"); }

// Runs fill(chunk_index, first_point, n_points, out) over fixed-size chunks.
template <class Fill>
void fill_chunks(std::vector<double>& data, int n, std::size_t count, Fill fill) {
  data.assign(count * static_cast<std::size_t>(n), 0.0);
  const std::size_t chunks = (count + kExactChunk - 1) / kExactChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t first = c * kExactChunk;
    const std::size_t len = std::min(kExactChunk, count - first);
    fill(c, len, data.data() + first * n);
  });
}

// Singular values of the lower bidiagonal matrix with diagonal d and
// subdiagonal e, via the zero-diagonal Golub-Kahan tridiagonal form whose
// eigenvalues are +-sigma. Returned descending.
std::vector<double> bidiagonal_singular_values(const std::vector<double>& d,
                                               const std::vector<double>& e) {
  const std::size_t n = d.size();
  std::vector<double> zeros(2 * n, 0.0);
  std::vector<double> off(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    off[2 * i] = d[i];
    if (i + 1 < n) off[2 * i + 1] = e[i];
  }
  std::vector<double> ev = tridiagonal_eigenvalues(zeros, off);
  std::vector<double> sigma(ev.begin(), ev.begin() + n);
  for (double& s : sigma) s = std::abs(s);
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

void laguerre_fill(int n, double k1, double k2, double t, Engine& engine, std::size_t len,
                   double* out) {
  const double beta = 2.0 * k2;
  std::vector<double> d(n), e(n > 1 ? n - 1 : 0);
  for (std::size_t p = 0; p < len; ++p) {
    for (int i = 0; i < n; ++i) d[i] = chi(engine, 2.0 * k1 + 1.0 + beta * (n - 1 - i));
    for (int i = 0; i + 1 < n; ++i) e[i] = chi(engine, beta * (n - 1 - i));
    const std::vector<double> sigma = bidiagonal_singular_values(d, e);
    double* row = out + p * n;
    for (int i = 0; i < n; ++i) row[i] = std::sqrt(t) * sigma[i];
    project_in_place(RootKind::B, std::span<double>(row, n));
  }
}

double log_target(const RootSystemSpec& spec, std::span<const double> y, double t) {
  double sq = 0.0;
  for (double v : y) sq += v * v;
  return log_weight_unchecked(spec, y) - sq / (2.0 * t);
}

// Signed permutations forming the Weyl group: image (g y)_i = sign_i y_perm_i.
struct WeylElement {
  std::vector<int> perm;
  std::vector<double> sign;
};

std::size_t weyl_order(RootKind kind, int n) {
  double order = std::tgamma(n + 1.0);
  if (kind == RootKind::B) order *= std::pow(2.0, n);
  if (kind == RootKind::D) order *= std::pow(2.0, n - 1);
  return order > 1e9 ? std::numeric_limits<std::size_t>::max()
                     : static_cast<std::size_t>(order);
}

std::vector<WeylElement> weyl_group(RootKind kind, int n) {
  std::vector<WeylElement> group;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const unsigned sign_patterns = kind == RootKind::A ? 1u : (1u << n);
  do {
    for (unsigned mask = 0; mask < sign_patterns; ++mask) {
      if (kind == RootKind::D && std::popcount(mask) % 2 != 0) continue;
      WeylElement g{perm, std::vector<double>(n, 1.0)};
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) g.sign[i] = -1.0;
      }
      group.push_back(std::move(g));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return group;
}

constexpr std::size_t kMaxFoldedGroup = 5040;

// Independence proposal N(center, inflation t Sigma) and its density on the chamber.
class GaussianProposal {
 public:
  GaussianProposal(const RootSystemSpec& spec, double t, double inflation)
      : kind_(spec.kind()), n_(spec.n()) {
    const LimitGaussian g = limit_gaussian(spec, t);
    center_ = Eigen::Map<const Eigen::VectorXd>(g.center.data(), n_);
    scale_ = std::sqrt(inflation * t);
    upper_ = g.precision.chol.transpose();
    fold_ = weyl_order(kind_, n_) <= kMaxFoldedGroup;
    if (fold_) group_ = weyl_group(kind_, n_);
  }

  const Eigen::VectorXd& center() const { return center_; }
  bool folded() const { return fold_; }

  // Writes a draw into y; false when the unfolded draw left the chamber.
  bool draw(Engine& engine, std::normal_distribution<double>& normal,
            std::vector<double>& y) const {
    Eigen::VectorXd xi(n_);
    for (int i = 0; i < n_; ++i) xi[i] = normal(engine);
    const Eigen::VectorXd z =
        center_ + scale_ * upper_.triangularView<Eigen::Upper>().solve(xi);
    for (int i = 0; i < n_; ++i) y[i] = z[i];
    if (fold_) {
      project_in_place(kind_, y);
      return true;
    }
    return in_chamber(kind_, y);
  }

  // Log density of the emitted point up to an additive constant.
  double log_density(std::span<const double> y) const {
    if (!fold_) return -0.5 * quad(Eigen::Map<const Eigen::VectorXd>(y.data(), n_));
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(group_.size());
    Eigen::VectorXd gy(n_);
    for (std::size_t g = 0; g < group_.size(); ++g) {
      for (int i = 0; i < n_; ++i) gy[i] = group_[g].sign[i] * y[group_[g].perm[i]];
      terms[g] = -0.5 * quad(gy);
      best = std::max(best, terms[g]);
    }
    double sum = 0.0;
    for (double v : terms) sum += std::exp(v - best);
    return best + std::log(sum);
  }

 private:
  double quad(const Eigen::VectorXd& v) const {
    return (upper_ * (v - center_)).squaredNorm() / (scale_ * scale_);
  }

  RootKind kind_;
  int n_;
  Eigen::VectorXd center_;
  double scale_;
  Eigen::MatrixXd upper_;  // L^T with S = L L^T
  bool fold_;
  std::vector<WeylElement> group_;
};

struct ChainResult {
  std::vector<double> points;  // row-major
  double acceptance = 0.0;
  int thinning = 1;
  double max_lag1 = 0.0;
  std::vector<double> ess;  // per coordinate
};

double max_lag_autocorrelation(const std::vector<double>& rows, int n, std::size_t lag) {
  const std::size_t m = rows.size() / n;
  double worst = 0.0;
  std::vector<double> col(m);
  for (int j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) col[i] = rows[i * n + j];
    worst = std::max(worst, autocorrelation(col, lag));
  }
  return worst;
}

class Chain {
 public:
  Chain(const RootSystemSpec& spec, double t, SamplerMethod method,
        const GaussianProposal& proposal, const LimitGaussian& limit, Engine engine)
      : spec_(spec), t_(t), method_(method), proposal_(proposal), engine_(std::move(engine)),
        n_(spec.n()), state_(n_), candidate_(n_) {
    for (int i = 0; i < n_; ++i) {
      step_.push_back(2.4 / std::sqrt(static_cast<double>(n_)) *
                      std::sqrt(limit.covariance(i, i)));
    }
    initialise();
  }

  void step() {
    ++proposed_;
    double log_ratio;
    double cand_target, cand_q = 0.0;
    if (method_ == SamplerMethod::IndepMetropolis) {
      if (!proposal_.draw(engine_, normal_, candidate_)) return;
      cand_target = log_target(spec_, candidate_, t_);
      if (!std::isfinite(cand_target)) return;
      cand_q = proposal_.log_density(candidate_);
      log_ratio = cand_target - state_target_ + state_q_ - cand_q;
    } else {
      for (int i = 0; i < n_; ++i) candidate_[i] = state_[i] + step_[i] * normal_(engine_);
      if (!in_chamber(spec_.kind(), candidate_)) return;
      cand_target = log_target(spec_, candidate_, t_);
      if (!std::isfinite(cand_target)) return;
      log_ratio = cand_target - state_target_;
    }
    if (log_ratio >= 0.0 || std::log(uniform_(engine_)) < log_ratio) {
      state_.swap(candidate_);
      state_target_ = cand_target;
      state_q_ = cand_q;
      ++accepted_;
    }
  }

  void append_state(std::vector<double>& out) const {
    out.insert(out.end(), state_.begin(), state_.end());
  }

  double acceptance() const {
    return proposed_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(proposed_);
  }

 private:
  void initialise() {
    const Eigen::VectorXd& c = proposal_.center();
    for (int i = 0; i < n_; ++i) state_[i] = c[i];
    project_in_place(spec_.kind(), state_);
    state_target_ = log_target(spec_, state_, t_);
    for (int attempt = 0; attempt < 1000 && !std::isfinite(state_target_); ++attempt) {
      if (!proposal_.draw(engine_, normal_, state_)) continue;
      state_target_ = log_target(spec_, state_, t_);
    }
    if (!std::isfinite(state_target_)) {
      throw RuntimeAbort("could not find a starting point with positive density");
    }
    if (method_ == SamplerMethod::IndepMetropolis) state_q_ = proposal_.log_density(state_);
  }

  const RootSystemSpec& spec_;
  double t_;
  SamplerMethod method_;
  const GaussianProposal& proposal_;
  Engine engine_;
  int n_;
  std::vector<double> state_, candidate_, step_;
  double state_target_ = 0.0;
  double state_q_ = 0.0;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::size_t proposed_ = 0;
  std::size_t accepted_ = 0;
};

constexpr std::size_t kPilotLength = 2000;
// Thinned points drawn per chain before the lag-1 screen is judged, so that
// the screen is meaningful even for short chains.
constexpr std::size_t kScreenLength = 2000;

void check_acceptance(const Chain& chain) {
  if (chain.acceptance() < 1e-3) {
    throw RuntimeAbort("Metropolis acceptance rate " + format_number(chain.acceptance()) +
                       " is below 1e-3; retry with --method rw-metropolis");
  }
}

ChainResult run_chain(Chain& chain, int n, std::size_t length) {
  ChainResult result;
  for (int i = 0; i < kBurnIn; ++i) chain.step();

  std::vector<double> pilot;
  pilot.reserve(kPilotLength * n);
  for (std::size_t i = 0; i < kPilotLength; ++i) {
    chain.step();
    chain.append_state(pilot);
  }
  check_acceptance(chain);
  int thinning = 1;
  while (thinning < kMaxThinning &&
         max_lag_autocorrelation(pilot, n, static_cast<std::size_t>(thinning)) >= kLag1Screen) {
    ++thinning;
  }

  const std::size_t screened = std::max(length, kScreenLength);
  std::vector<double> out;
  for (;;) {
    out.clear();
    out.reserve(screened * n);
    for (std::size_t p = 0; p < screened; ++p) {
      for (int s = 0; s < thinning; ++s) chain.step();
      chain.append_state(out);
    }
    result.max_lag1 = max_lag_autocorrelation(out, n, 1);
    if (result.max_lag1 < kLag1Screen || thinning >= kMaxThinning) break;
    thinning = std::min(kMaxThinning, 2 * thinning);
  }
  check_acceptance(chain);
  if (result.max_lag1 >= kLag1Screen) {
    throw RuntimeAbort("lag-1 autocorrelation " + format_number(result.max_lag1) +
                       " still above " + format_number(kLag1Screen) + " at thinning " +
                       std::to_string(thinning) + "; retry with --method rw-metropolis");
  }
  out.resize(length * n);
  result.points = std::move(out);
  result.thinning = thinning;
  result.acceptance = chain.acceptance();
  std::vector<double> col(length);
  for (int j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < length; ++i) col[i] = result.points[i * n + j];
    result.ess.push_back(effective_sample_size(col));
  }
  return result;
}

}  // namespace

SampleBatch sample_tridiag_a(int n, double k, double t, std::size_t count, std::uint64_t seed) {
  const RootSystemSpec spec = RootSystemSpec::A(n, k);
  require(k > 0.0, "the beta-Hermite sampler needs k > 0");
  check_time(t);
  check_count(count);
  SampleBatch batch(spec, t, SamplerMethod::TridiagA, seed);
  const double beta = 2.0 * k;
  fill_chunks(batch.data(), n, count, [&](std::size_t c, std::size_t len, double* out) {
    Engine engine = make_engine(seed, c);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
    for (std::size_t p = 0; p < len; ++p) {
      for (int i = 0; i < n; ++i) diag[i] = normal(engine);
      for (int i = 0; i + 1 < n; ++i) off[i] = chi(engine, beta * (n - 1 - i)) / std::sqrt(2.0);
      const std::vector<double> ev = tridiagonal_eigenvalues(diag, off);
      double* row = out + p * n;
      for (int i = 0; i < n; ++i) row[i] = std::sqrt(t) * ev[i];
      project_in_place(RootKind::A, std::span<double>(row, n));
    }
  });
  batch.diagnostics.effective_sample_size = static_cast<double>(count);
  return batch;
}

SampleBatch sample_tridiag_b(int n, double k1, double k2, double t, std::size_t count,
                             std::uint64_t seed) {
  const RootSystemSpec spec = RootSystemSpec::B(n, k1, k2);
  require(k2 > 0.0, "the beta-Laguerre sampler needs k2 > 0");
  check_time(t);
  check_count(count);
  // The smallest chi order is 2 k1 + 1; only a nonpositive order would
  // leave the model undefined.
  if (2.0 * k1 + 1.0 <= 0.0) {
    return sample_metropolis(spec, t, count, seed);
  }
  SampleBatch batch(spec, t, SamplerMethod::TridiagB, seed);
  fill_chunks(batch.data(), n, count, [&](std::size_t c, std::size_t len, double* out) {
    Engine engine = make_engine(seed, c);
    laguerre_fill(n, k1, k2, t, engine, len, out);
  });
  batch.diagnostics.effective_sample_size = static_cast<double>(count);
  return batch;
}

SampleBatch sample_exact(const RootSystemSpec& spec, double t, std::size_t count,
                         std::uint64_t seed) {
  switch (spec.kind()) {
    case RootKind::A: return sample_tridiag_a(spec.n(), spec.k(), t, count, seed);
    case RootKind::B: return sample_tridiag_b(spec.n(), spec.k1(), spec.k2(), t, count, seed);
    case RootKind::D: break;
  }
  require(spec.k() > 0.0, "the D sampler needs k > 0");
  check_time(t);
  check_count(count);
  const int n = spec.n();
  SampleBatch batch(spec, t, SamplerMethod::TridiagB, seed);
  batch.parameters["construction"] = "B(k1=0) with random last sign";
  fill_chunks(batch.data(), n, count, [&](std::size_t c, std::size_t len, double* out) {
    Engine engine = make_engine(seed, c);
    laguerre_fill(n, 0.0, spec.k(), t, engine, len, out);
    std::bernoulli_distribution flip(0.5);
    for (std::size_t p = 0; p < len; ++p) {
      if (flip(engine)) out[p * n + n - 1] = -out[p * n + n - 1];
    }
  });
  batch.diagnostics.effective_sample_size = static_cast<double>(count);
  return batch;
}

SampleBatch sample_metropolis(const RootSystemSpec& spec, double t, std::size_t count,
                              std::uint64_t seed, double proposal_inflation,
                              SamplerMethod method) {
  check_time(t);
  check_count(count);
  require(std::isfinite(proposal_inflation) && proposal_inflation >= 1.0,
          "proposal inflation must be >= 1");
  require(method == SamplerMethod::IndepMetropolis ||
              method == SamplerMethod::RandomWalkMetropolis,
          "sample_metropolis needs a Metropolis method");
  const int n = spec.n();
  const LimitGaussian limit = limit_gaussian(spec, t);
  const GaussianProposal proposal(spec, t, proposal_inflation);

  const std::size_t chains = (count + kChainLength - 1) / kChainLength;
  std::vector<ChainResult> results(chains);
  parallel_for(chains, [&](std::size_t c) {
    const std::size_t first = c * count / chains;
    const std::size_t last = (c + 1) * count / chains;
    Chain chain(spec, t, method, proposal, limit, make_engine(seed, c));
    results[c] = run_chain(chain, n, last - first);
  });

  SampleBatch batch(spec, t, method, seed);
  batch.parameters["proposal_inflation"] = format_number(proposal_inflation);
  if (method == SamplerMethod::IndepMetropolis) {
    batch.parameters["proposal"] = proposal.folded() ? "folded" : "reject-outside";
  }
  auto& data = batch.data();
  data.reserve(count * n);
  double accept = 0.0;
  int thinning = 1;
  double lag1 = 0.0;
  std::vector<double> ess(n, 0.0);
  for (const ChainResult& r : results) {
    data.insert(data.end(), r.points.begin(), r.points.end());
    const double share = static_cast<double>(r.points.size() / n) / static_cast<double>(count);
    accept += share * r.acceptance;
    thinning = std::max(thinning, r.thinning);
    lag1 = std::max(lag1, r.max_lag1);
    for (int j = 0; j < n; ++j) ess[j] += r.ess[j];
  }
  batch.diagnostics.acceptance_rate = accept;
  batch.diagnostics.thinning = thinning;
  batch.diagnostics.burn_in = kBurnIn;
  batch.diagnostics.max_lag1_autocorrelation = lag1;
  batch.diagnostics.effective_sample_size = *std::min_element(ess.begin(), ess.end());
  return batch;
}

double autocorrelation(std::span<const double> series, std::size_t lag) {
  const std::size_t m = series.size();
  if (lag >= m) return 0.0;
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / m;
  double var = 0.0;
  for (double v : series) var += (v - mean) * (v - mean);
  if (var == 0.0) return 0.0;
  double cov = 0.0;
  for (std::size_t i = 0; i + lag < m; ++i) cov += (series[i] - mean) * (series[i + lag] - mean);
  return cov / var;
}

double effective_sample_size(std::span<const double> series) {
  const std::size_t m = series.size();
  if (m < 4) return static_cast<double>(m);
  double tau = -1.0;
  for (std::size_t lag = 0; lag + 1 < m; lag += 2) {
    const double pair = autocorrelation(series, lag) + autocorrelation(series, lag + 1);
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  tau = std::max(tau, 1.0 / static_cast<double>(m));
  return std::min(static_cast<double>(m), static_cast<double>(m) / tau);
}

}  // namespace freeze
