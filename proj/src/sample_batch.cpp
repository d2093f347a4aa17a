#include "freeze/sample_batch.hpp"

#include <cmath>

#include "freeze/error.hpp"

namespace freeze {

std::string to_string(SamplerMethod method) {
  switch (method) {
    case SamplerMethod::TridiagA: return "tridiag-a";
    case SamplerMethod::TridiagB: return "tridiag-b";
    case SamplerMethod::IndepMetropolis: return "indep-metropolis";
    case SamplerMethod::RandomWalkMetropolis: return "rw-metropolis";
    case SamplerMethod::EulerMaruyama: return "euler-maruyama";
  }
  return "?";
}

SamplerMethod parse_sampler_method(const std::string& text) {
  for (auto m : {SamplerMethod::TridiagA, SamplerMethod::TridiagB, SamplerMethod::IndepMetropolis,
                 SamplerMethod::RandomWalkMetropolis, SamplerMethod::EulerMaruyama}) {
    if (to_string(m) == text) return m;
  }
  throw InvalidArgument("unknown sampler method '" + text + "'");
}

SampleBatch::SampleBatch(RootSystemSpec spec, double t, SamplerMethod method, std::uint64_t seed)
    : spec_(spec), t_(t), method_(method), seed_(seed) {
  require(std::isfinite(t) && t > 0.0, "time must be > 0");
}

ChamberPoint SampleBatch::point(std::size_t i) const {
  const auto r = row(i);
  return ChamberPoint(spec_.kind(), std::vector<double>(r.begin(), r.end()));
}

Eigen::MatrixXd SampleBatch::to_matrix(std::span<const double> center) const {
  const int n = dim();
  require(center.empty() || center.size() == static_cast<std::size_t>(n),
          "center has the wrong dimension");
  Eigen::MatrixXd m(count(), n);
  for (std::size_t i = 0; i < count(); ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = data_[i * n + j] - (center.empty() ? 0.0 : center[j]);
    }
  }
  return m;
}

}  // namespace freeze
