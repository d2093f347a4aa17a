#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "freeze/root_system.hpp"

namespace freeze {

enum class SamplerMethod { TridiagA, TridiagB, IndepMetropolis, RandomWalkMetropolis, EulerMaruyama };
std::string to_string(SamplerMethod method);
SamplerMethod parse_sampler_method(const std::string& text);

struct SamplerDiagnostics {
  double acceptance_rate = 1.0;
  double effective_sample_size = 0.0;
  int thinning = 1;
  int burn_in = 0;
  double max_lag1_autocorrelation = 0.0;
  std::size_t aborted_paths = 0;
};

// Points of one fixed-time law, stored row-major (count x n).
class SampleBatch {
 public:
  SampleBatch(RootSystemSpec spec, double t, SamplerMethod method, std::uint64_t seed);

  const RootSystemSpec& spec() const { return spec_; }
  double t() const { return t_; }
  SamplerMethod method() const { return method_; }
  std::uint64_t seed() const { return seed_; }
  int dim() const { return spec_.n(); }
  std::size_t count() const { return data_.size() / static_cast<std::size_t>(dim()); }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim(), static_cast<std::size_t>(dim())};
  }
  ChamberPoint point(std::size_t i) const;

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  // count x n copy, optionally shifted by -center.
  Eigen::MatrixXd to_matrix(std::span<const double> center = {}) const;

  // Extra generation inputs needed to regenerate the batch (inflation, x0, ...).
  std::map<std::string, std::string> parameters;
  SamplerDiagnostics diagnostics;

 private:
  RootSystemSpec spec_;
  double t_;
  SamplerMethod method_;
  std::uint64_t seed_;
  std::vector<double> data_;
};

}  // namespace freeze
