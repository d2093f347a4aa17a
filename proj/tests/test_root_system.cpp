#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "freeze/error.hpp"
#include "freeze/root_system.hpp"

using namespace freeze;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, int n, double scale = 2.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(RootSystemSpec::A(0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(RootSystemSpec::D(1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(RootSystemSpec::B(2, -1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(RootSystemSpec::A(2, std::numeric_limits<double>::infinity()),
                  InvalidArgument);
  CHECK_NOTHROW(RootSystemSpec::D(2, 0.0));
}

TEST_CASE("homogeneity degrees") {
  CHECK(RootSystemSpec::A(4, 2.0).homogeneity_degree() == doctest::Approx(2.0 * 4 * 3 / 2));
  CHECK(RootSystemSpec::B(3, 1.5, 2.0).homogeneity_degree() ==
        doctest::Approx(2.0 * 3 * 2 + 1.5 * 3));
  CHECK(RootSystemSpec::D(3, 2.0).homogeneity_degree() == doctest::Approx(2.0 * 3 * 2));
}

TEST_CASE("chamber membership") {
  CHECK(in_chamber(RootKind::A, std::vector<double>{1.0, 0.0, -2.0}));
  CHECK_FALSE(in_chamber(RootKind::A, std::vector<double>{0.0, 1.0}));
  CHECK_FALSE(in_chamber(RootKind::B, std::vector<double>{1.0, -0.5}));
  CHECK(in_chamber(RootKind::D, std::vector<double>{1.0, -0.5}));
  CHECK_FALSE(in_chamber(RootKind::D, std::vector<double>{1.0, -1.5}));
  CHECK_THROWS_AS(ChamberPoint(RootKind::A, {0.0, 1.0}), InvalidArgument);
}

TEST_CASE("log_weight examples") {
  const auto a = RootSystemSpec::A(2, 1.0);
  CHECK(log_weight(a, ChamberPoint(RootKind::A, {1.0, 0.0})) == doctest::Approx(0.0));
  CHECK(log_weight(a, ChamberPoint(RootKind::A, {1.0, 1.0})) ==
        -std::numeric_limits<double>::infinity());

  const double c = 1.7;
  const auto b = RootSystemSpec::B(1, 0.8, 3.0);
  CHECK(log_weight(b, ChamberPoint(RootKind::B, {c})) == doctest::Approx(2 * 0.8 * std::log(c)));

  // Zero multiplicity: weight is identically 1, even on walls.
  CHECK(log_weight(RootSystemSpec::A(2, 0.0), ChamberPoint(RootKind::A, {1.0, 1.0})) == 0.0);

  CHECK_THROWS_AS(log_weight(a, ChamberPoint(RootKind::A, {1.0, 0.0, -1.0})), InvalidArgument);
}

TEST_CASE("log_weight is homogeneous of degree 2 gamma") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  const RootSystemSpec specs[] = {RootSystemSpec::A(4, 1.3), RootSystemSpec::B(3, 0.7, 2.1),
                                  RootSystemSpec::D(4, 0.9)};
  for (const auto& spec : specs) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto y = project_to_chamber(spec.kind(), random_vector(rng, spec.n()));
      const double scale = u(rng);
      std::vector<double> ys(y.coords().begin(), y.coords().end());
      for (double& v : ys) v /= scale;
      const double lhs = log_weight(spec, y);
      const double rhs = 2.0 * spec.homogeneity_degree() * std::log(scale) +
                         log_weight(spec, ChamberPoint(spec.kind(), ys));
      CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("freezing_potential examples") {
  CHECK(freezing_potential(RootKind::A, std::vector<double>{1.0, -1.0}) ==
        doctest::Approx(2 * std::log(2.0) - 1.0));
  CHECK(freezing_potential(RootKind::D, std::vector<double>{2.0, 0.0}) ==
        doctest::Approx(2 * std::log(4.0) - 2.0));
  CHECK(freezing_potential(RootKind::B, std::vector<double>{std::sqrt(2.0)}, 1.0) ==
        doctest::Approx(std::log(2.0) - 1.0));
  CHECK(freezing_potential(RootKind::A, std::vector<double>{1.0, 1.0}) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("W_A is concave on segments inside the chamber") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = project_to_chamber(RootKind::A, random_vector(rng, 4));
    const auto q = project_to_chamber(RootKind::A, random_vector(rng, 4));
    std::vector<double> mid(4);
    for (int i = 0; i < 4; ++i) mid[i] = 0.5 * (p[i] + q[i]);
    const double wp = freezing_potential(p);
    const double wq = freezing_potential(q);
    CHECK(freezing_potential(RootKind::A, mid) >= 0.5 * (wp + wq) - 1e-12);
  }
}

TEST_CASE("project_to_chamber examples") {
  auto coords = [](const ChamberPoint& p) {
    return std::vector<double>(p.coords().begin(), p.coords().end());
  };
  CHECK(coords(project_to_chamber(RootKind::A, std::vector<double>{0.0, 1.0})) ==
        std::vector<double>{1.0, 0.0});
  CHECK(coords(project_to_chamber(RootKind::B, std::vector<double>{-3.0, 2.0})) ==
        std::vector<double>{3.0, 2.0});
  CHECK(coords(project_to_chamber(RootKind::D, std::vector<double>{1.0, -2.0})) ==
        std::vector<double>{2.0, -1.0});
  CHECK(coords(project_to_chamber(RootKind::D, std::vector<double>{-1.0, -2.0})) ==
        std::vector<double>{2.0, 1.0});
}

TEST_CASE("project_to_chamber is idempotent and fixes chamber points") {
  std::mt19937_64 rng(3);
  for (RootKind kind : {RootKind::A, RootKind::B, RootKind::D}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto v = random_vector(rng, 5);
      const auto once = project_to_chamber(kind, v);
      CHECK(in_chamber(kind, once.coords()));
      const auto twice = project_to_chamber(kind, once.coords());
      CHECK(std::equal(once.coords().begin(), once.coords().end(), twice.coords().begin()));
      // Weyl group elements are orthogonal: the norm is preserved.
      double n0 = 0, n1 = 0;
      for (int i = 0; i < 5; ++i) {
        n0 += v[i] * v[i];
        n1 += once[i] * once[i];
      }
      CHECK(n1 == doctest::Approx(n0).epsilon(1e-14));
    }
  }
}
