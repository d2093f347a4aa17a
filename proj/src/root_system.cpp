#include "freeze/root_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "freeze/error.hpp"

namespace freeze {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// k * ln(gap) with the convention 0 * ln(0) = 0 (the factor gap^0 is 1).
double weighted_log(double k, double gap) {
  if (k == 0.0) return 0.0;
  if (gap <= 0.0) return kNegInf;
  return k * std::log(gap);
}

double squared_norm(std::span<const double> y) {
  double s = 0.0;
  for (double v : y) s += v * v;
  return s;
}

}  // namespace

std::string to_string(RootKind kind) {
  switch (kind) {
    case RootKind::A: return "A";
    case RootKind::B: return "B";
    case RootKind::D: return "D";
  }
  return "?";
}

RootKind parse_root_kind(const std::string& text) {
  if (text == "A" || text == "a") return RootKind::A;
  if (text == "B" || text == "b") return RootKind::B;
  if (text == "D" || text == "d") return RootKind::D;
  throw InvalidArgument("unknown root system '" + text + "' (expected A, B or D)");
}

RootSystemSpec::RootSystemSpec(RootKind kind, int n, double k, double k_wall)
    : kind_(kind), n_(n), k_(k), k_wall_(k_wall) {
  require(n >= 1, "particle count must be >= 1");
  require(kind != RootKind::D || n >= 2, "root system D requires n >= 2");
  require(std::isfinite(k) && k >= 0.0, "multiplicity must be finite and >= 0");
  require(std::isfinite(k_wall) && k_wall >= 0.0,
          "multiplicity must be finite and >= 0");
}

RootSystemSpec RootSystemSpec::A(int n, double k) {
  return {RootKind::A, n, k, 0.0};
}
RootSystemSpec RootSystemSpec::B(int n, double k1, double k2) {
  return {RootKind::B, n, k2, k1};
}
RootSystemSpec RootSystemSpec::D(int n, double k) {
  return {RootKind::D, n, k, 0.0};
}

double RootSystemSpec::homogeneity_degree() const {
  const double pairs = 0.5 * n_ * (n_ - 1);
  switch (kind_) {
    case RootKind::A: return k_ * pairs;
    case RootKind::B: return 2.0 * k_ * pairs + k_wall_ * n_;
    case RootKind::D: return 2.0 * k_ * pairs;
  }
  return 0.0;
}

std::string RootSystemSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(kind_) << "(n=" << n_;
  if (kind_ == RootKind::B) {
    os << ", k1=" << k_wall_ << ", k2=" << k_;
  } else {
    os << ", k=" << k_;
  }
  os << ")";
  return os.str();
}

bool in_chamber(RootKind kind, std::span<const double> y) {
  const std::size_t n = y.size();
  if (n == 0) return false;
  for (double v : y) {
    if (!std::isfinite(v)) return false;
  }
  if (kind == RootKind::D) {
    if (n < 2) return false;
    for (std::size_t i = 0; i + 2 < n; ++i) {
      if (y[i] < y[i + 1]) return false;
    }
    return y[n - 2] >= std::abs(y[n - 1]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (y[i] < y[i + 1]) return false;
  }
  return kind == RootKind::A || y[n - 1] >= 0.0;
}

ChamberPoint::ChamberPoint(RootKind kind, std::vector<double> coords)
    : kind_(kind), coords_(std::move(coords)) {
  require(in_chamber(kind_, coords_),
          "point is not in the Weyl chamber of type " + to_string(kind_));
}

double log_weight_unchecked(const RootSystemSpec& spec,
                            std::span<const double> y) {
  const std::size_t n = y.size();
  const double k = spec.k();
  double acc = 0.0;
  if (spec.kind() == RootKind::A) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        acc += weighted_log(2.0 * k, y[i] - y[j]);
      }
    }
    return acc;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // y_i^2 - y_j^2 factored to keep precision near the walls.
      acc += weighted_log(2.0 * k, (y[i] - y[j]) * (y[i] + y[j]));
    }
  }
  if (spec.kind() == RootKind::B) {
    for (std::size_t i = 0; i < n; ++i) {
      acc += weighted_log(2.0 * spec.k1(), y[i]);
    }
  }
  return acc;
}

double log_weight(const RootSystemSpec& spec, const ChamberPoint& y) {
  require(y.size() == static_cast<std::size_t>(spec.n()),
          "dimension mismatch between root system and point");
  require(y.kind() == spec.kind(), "point belongs to a different chamber");
  return log_weight_unchecked(spec, y.coords());
}

double freezing_potential(RootKind kind, std::span<const double> y, double nu) {
  const std::size_t n = y.size();
  double acc = -0.5 * squared_norm(y);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double gap = kind == RootKind::A ? y[i] - y[j]
                                             : (y[i] - y[j]) * (y[i] + y[j]);
      acc += weighted_log(2.0, gap);
    }
  }
  if (kind == RootKind::B) {
    for (std::size_t i = 0; i < n; ++i) acc += weighted_log(2.0 * nu, y[i]);
  }
  return acc;
}

double freezing_potential(const ChamberPoint& y, double nu) {
  return freezing_potential(y.kind(), y.coords(), nu);
}

void project_in_place(RootKind kind, std::span<double> v) {
  if (kind == RootKind::A) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return;
  }
  bool odd_negatives = false;
  for (double& x : v) {
    if (std::signbit(x) && x != 0.0) odd_negatives = !odd_negatives;
    x = std::abs(x);
  }
  std::sort(v.begin(), v.end(), std::greater<>());
  if (kind == RootKind::D && odd_negatives) v.back() = -v.back();
}

ChamberPoint project_to_chamber(RootKind kind, std::span<const double> v) {
  std::vector<double> w(v.begin(), v.end());
  project_in_place(kind, w);
  return ChamberPoint(kind, std::move(w));
}

}  // namespace freeze
