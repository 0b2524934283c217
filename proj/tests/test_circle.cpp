#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shiftnum/circle.hpp"

using namespace shiftnum::circle;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix2d mat(double a, double b, double c, double d) {
  Eigen::Matrix2d m;
  m << a, b, c, d;
  return m;
}

std::vector<LiftedRayMap> mixed_samples(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<LiftedRayMap> out;
  const MatrixKind kinds[] = {MatrixKind::Elliptic, MatrixKind::Parabolic, MatrixKind::Hyperbolic};
  for (int i = 0; i < count; ++i) out.push_back(random_lifted_ray_map(rng, kinds[i % 3]));
  return out;
}

}  // namespace

TEST_CASE("ray angles") {
  CHECK(ray_angle({1, 0}) == 0.0);
  CHECK(ray_angle({0, 1}) == Approx(0.5));
  CHECK(ray_angle({-1, 0}) == Approx(1.0));
  CHECK(ray_angle({0, -1}) == Approx(1.5));
}

TEST_CASE("lift construction") {
  const LiftedRayMap r(mat(0, -1, 1, 0), 0);
  CHECK(r.value_at_zero() == Approx(0.5));
  CHECK(r(0.25) == Approx(0.75));
  CHECK(r(1.25) == Approx(1.75));
  CHECK(r(-3.0) == Approx(-2.5));
  CHECK(LiftedRayMap(mat(0, -1, 1, 0), 4).value_at_zero() == Approx(4.5));
  CHECK(LiftedRayMap(mat(0, -1, 1, 0), -3).value_at_zero() == Approx(-1.5));
  CHECK_THROWS_AS(LiftedRayMap(mat(1, 0, 0, -1), 0), std::invalid_argument);
  CHECK(LiftedRayMap::with_value_at_zero(mat(-1, 0, 0, -1), 3.0).value_at_zero() == Approx(3.0));
}

TEST_CASE("lift is increasing and commutes with the period") {
  for (const auto& g : mixed_samples(5, 30)) {
    double prev = g(-2.0);
    for (int i = -199; i <= 200; ++i) {
      const double x = i / 100.0;
      const double y = g(x);
      CHECK(y > prev);
      CHECK(g(x + 2.0) == Approx(y + 2.0).epsilon(1e-12));
      CHECK(g(x + 1.0) == Approx(y + 1.0).epsilon(1e-12));
      prev = y;
    }
  }
}

TEST_CASE("numeric translation number examples") {
  CHECK(translation_number_numeric(LiftedCircleMap::translation(3.0), 0.3, 1000) == Approx(3.0).epsilon(1e-15));
  CHECK(translation_number_numeric(LiftedCircleMap::translation(-2.0, 2.0), 1.7, 57) ==
        Approx(-2.0).epsilon(1e-15));
  CHECK(translation_number_numeric(LiftedCircleMap::translation(0.5), 0.0, 10000) ==
        Approx(0.5).epsilon(1e-4));
  const auto diag = LiftedCircleMap::from_ray_map(LiftedRayMap(mat(2, 0, 0, 0.5), 0));
  CHECK(translation_number_numeric(diag, 0.0, 1000) == 0.0);
  CHECK_THROWS_AS(translation_number_numeric(diag, 0.0, 0), std::invalid_argument);
}

TEST_CASE("piecewise linear maps") {
  // Attracting fixed point at 0 with a full turn added: rho = 1.
  auto f = LiftedCircleMap::piecewise_linear({{0.0, 1.0}, {0.5, 1.25}, {1.0, 2.0}});
  CHECK(f(0.5) == Approx(1.25));
  CHECK(f(1.5) == Approx(2.25));
  CHECK(translation_number_numeric(f, 0.3, 10000) == Approx(1.0).epsilon(2e-4));
  CHECK(translation_number_weighted(f, 0.3, 10000) == Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(LiftedCircleMap::piecewise_linear({{0.0, 0.0}, {1.0, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(LiftedCircleMap::piecewise_linear({{0.0, 0.0}, {0.5, 0.6}, {0.4, 0.7}, {1.0, 1.0}}),
                  std::invalid_argument);
}

TEST_CASE("exact translation number examples") {
  CHECK(translation_number_exact(LiftedRayMap::identity()) == 0.0);
  CHECK(translation_number_exact(LiftedRayMap::rotation(kPi / 3)) == Approx(1.0 / 3.0));
  CHECK(translation_number_exact(LiftedRayMap::with_value_at_zero(mat(1, 1, 0, 1), 0.0)) == 0.0);
  CHECK(translation_number_exact(LiftedRayMap::rotation(-kPi / 3, 0)) == Approx(5.0 / 3.0));
  CHECK(translation_number_exact(LiftedRayMap::rotation(-kPi / 3, -2)) == Approx(-1.0 / 3.0));
  // A scaled, conjugated rotation by pi/4.
  const Eigen::Matrix2d p = mat(2, 1, 1, 1);
  const Eigen::Matrix2d rot = 3.0 * mat(std::cos(kPi / 4), -std::sin(kPi / 4), std::sin(kPi / 4),
                                        std::cos(kPi / 4));
  const auto g = LiftedRayMap::with_value_at_zero(p * rot * p.inverse(), 0.2);
  CHECK(translation_number_exact(g) == Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(LiftedRayMap(mat(1, 0, 0, 0), 0), std::invalid_argument);
}

TEST_CASE("compose_lifts") {
  const auto g = LiftedRayMap::rotation(0.7, 2);
  const auto id_g = compose_lifts(LiftedRayMap::identity(), g);
  CHECK(id_g.value_at_zero() == Approx(g.value_at_zero()));
  const auto shifted = compose_lifts(LiftedRayMap::central(1), g);
  CHECK(shifted.value_at_zero() == Approx(g.value_at_zero() + 2.0));
  const auto r = LiftedRayMap::rotation(kPi / 3);
  const auto r3 = compose_lifts(r, compose_lifts(r, r));
  CHECK(r3.value_at_zero() == Approx(1.0));
  CHECK(r3.matrix().isApprox(mat(-1, 0, 0, -1), 1e-12));

  for (const auto& h : mixed_samples(8, 30)) {
    const auto c = compose_lifts(h, g);
    for (double x : {-1.3, 0.0, 0.4, 2.9}) CHECK(c(x) == Approx(h(g(x))).epsilon(1e-12));
  }
}

TEST_CASE("inverse") {
  for (const auto& g : mixed_samples(9, 30)) {
    const auto gi = g.inverse();
    for (double x : {-1.1, 0.0, 0.3, 3.3}) CHECK(gi(g(x)) == Approx(x).epsilon(1e-9));
    CHECK(translation_number_exact(gi) == Approx(-translation_number_exact(g)).epsilon(1e-9));
  }
}

TEST_CASE("dhkk_tau examples") {
  CHECK(dhkk_tau(LiftedRayMap(mat(2, 0, 0, 0.5), 0)) == 0);
  CHECK(dhkk_tau(LiftedRayMap(mat(2, 0, 0, 0.5), 2)) == 2);
  const auto neg = LiftedRayMap::with_value_at_zero(mat(-3, 0, 0, -1.0 / 3.0), 1.0);
  CHECK(neg.value_at_zero() == Approx(1.0));
  CHECK(dhkk_tau(neg) == 1);
  CHECK(translation_number_exact(neg) == 1.0);
  CHECK(dhkk_tau(LiftedRayMap(mat(0.25, 0, 0, 4), -4)) == -4);
  CHECK_THROWS_AS(dhkk_tau(LiftedRayMap(mat(1, 1, 0, 1), 0)), std::invalid_argument);
  CHECK_THROWS_AS(dhkk_tau(LiftedRayMap(mat(1, 0, 0, 1), 0)), std::invalid_argument);
  CHECK_THROWS_AS(dhkk_tau(LiftedRayMap(mat(2, 0, 0, 1), 0)), std::invalid_argument);
}

TEST_CASE("numeric and exact agree on mixed samples") {
  for (const auto& g : mixed_samples(2025, 100)) {
    const auto f = LiftedCircleMap::from_ray_map(g);
    const double exact = translation_number_exact(g);
    CHECK(std::abs(translation_number_numeric(f, 0.0, 100000) - exact) <= 2.0 / 100000);
    CHECK(std::abs(translation_number_weighted(f, 0.0, 100000) - exact) <= 1e-6);
  }
}

TEST_CASE("homogeneity, conjugacy invariance, central shift") {
  const auto samples = mixed_samples(31, 60);
  const long iters = 20000;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& g = samples[i];
    const auto f = LiftedCircleMap::from_ray_map(g);
    const double base = translation_number_numeric(f, 0.0, iters);
    for (int n = 2; n <= 8; ++n) {
      const double pw = translation_number_numeric(f.pow(n), 0.0, iters) / n;
      CHECK(std::abs(pw - base) <= 2.0 * kRayPeriod / iters);
    }
    const auto& h = samples[(i + 1) % samples.size()];
    const auto conj = compose_lifts(compose_lifts(h, g), h.inverse());
    CHECK(translation_number_exact(conj) == Approx(translation_number_exact(g)).epsilon(1e-9));
    for (int k : {-2, 1, 3}) {
      const auto shifted = compose_lifts(g, LiftedRayMap::central(k));
      CHECK(translation_number_exact(shifted) ==
            Approx(translation_number_exact(g) + 2.0 * k).epsilon(1e-12));
    }
  }
}

TEST_CASE("translations T_k are exact") {
  for (int k = -5; k <= 5; ++k) {
    CHECK(translation_number_numeric(LiftedCircleMap::translation(k), 0.25, 100000) == k);
    CHECK(translation_number_exact(LiftedRayMap::central(k)) == 2.0 * k);
  }
}
