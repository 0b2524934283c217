#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include "oracles.hpp"
#include "shiftnum/entropy.hpp"

using namespace shiftnum;
using namespace shiftnum::entropy;
using doctest::Approx;

namespace {

const std::string kChiFile = std::string(SHIFTNUM_DATA_DIR) + "/quintic_chi.txt";

long double quintic_ld(long double k) { return 5.0L * k * k * k / 6.0L + 25.0L * k / 6.0L; }

Eigen::Matrix2d diag(double a, double b) {
  Eigen::Matrix2d m;
  m << a, 0, 0, b;
  return m;
}

}  // namespace

TEST_CASE("grid") {
  const auto pts = Grid{}.points();
  CHECK(pts.size() == 161);
  CHECK(pts.front() == -40.0);
  CHECK(pts.back() == 40.0);
  CHECK(pts[80] == 0.0);
  CHECK_THROWS_AS(Grid({0.0, 1.0, 0.0}).points(), std::invalid_argument);
}

TEST_CASE("closed-form curves") {
  CHECK(spherical_twist_entropy(2, -1.0) == 1.0);
  CHECK(spherical_twist_entropy(5, 5.0) == 0.0);
  CHECK(spherical_twist_entropy(3, 0.0) == 0.0);
  CHECK_THROWS_AS(spherical_twist_entropy(1, 0.0), std::invalid_argument);
  CHECK(p_twist_entropy(1, -1.0) == 2.0);
  CHECK(p_twist_entropy(4, 3.0) == 0.0);
  CHECK(p_twist_entropy(2, 0.0) == 0.0);
  CHECK_THROWS_AS(p_twist_entropy(0, 0.0), std::invalid_argument);
  for (int n = 2; n <= 6; ++n) {
    CHECK(spherical_twist_curve(n).min_second_difference() >= -1e-9);
    CHECK(p_twist_curve(n).min_second_difference() >= -1e-9);
  }
  CHECK_THROWS_AS(EntropyCurve::sample([](double t) { return -t * t; }, Grid{}), std::domain_error);
  CHECK_THROWS_AS(EntropyCurve::sample([](double) { return -1.0; }, Grid{}), std::domain_error);
}

TEST_CASE("catalog") {
  auto eq = [](TauRange r, double lo, double hi) { return r.minus == lo && r.plus == hi; };
  CHECK(eq(catalog_tau(StandardAutoeq{3}), 3, 3));
  CHECK(eq(catalog_tau(StandardAutoeq{-7}), -7, -7));
  CHECK(eq(catalog_tau(SphericalTwist{4}), -3, 0));
  CHECK(eq(catalog_tau(PTwist{2}), -4, 0));
  CHECK(eq(catalog_tau(DhkkPseudoAnosov{circle::LiftedRayMap(diag(2, 0.5), 2)}), 2, 2));
  CHECK(eq(catalog_tau(DhkkPseudoAnosov{circle::LiftedRayMap::with_value_at_zero(diag(-3, -1.0 / 3), 1)}),
           1, 1));
  for (int n = 2; n <= 8; ++n) {
    CHECK(catalog_tau(SphericalTwist{n}).average() == (1.0 - n) / 2);
    CHECK(catalog_tau(PTwist{n}).average() == -n);
  }
  CHECK_THROWS_AS(catalog_tau(SphericalTwist{1}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_tau(PTwist{0}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_tau(DhkkPseudoAnosov{circle::LiftedRayMap::identity()}), std::invalid_argument);
}

TEST_CASE("identity functor") {
  const auto z = zero_curve();
  CHECK(catalog_tau(StandardAutoeq{0}).average() == 0.0);
  CHECK(check_entropy_bounds(z, 0, 0, 0).ok());
  CHECK(check_entropy_bounds(z, 0, 0, 0).worst_slack == 0.0);
}

TEST_CASE("chi polynomial") {
  const auto q = ChiPolynomial::quintic();
  CHECK(q.degree() == 3);
  CHECK(q(BigInt(1)) == 5);
  CHECK(q(BigInt(2)) == 15);
  CHECK(q(BigInt(3)) == 35);
  const auto loaded = ChiPolynomial::load(kChiFile);
  CHECK(loaded.coefficients() == q.coefficients());
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("-25/6") == Rational(-25, 6));
  CHECK_THROWS_AS(ChiPolynomial({Rational(1), Rational(-1)}), std::invalid_argument);
  CHECK_THROWS_AS(ChiPolynomial({Rational(100), Rational(-1), Rational(0)}), std::invalid_argument);
  CHECK_THROWS_AS(ChiPolynomial({Rational(-200), Rational(0), Rational(1)}), std::invalid_argument);
  CHECK_THROWS_AS(ChiPolynomial::load("/nonexistent/chi.txt"), std::runtime_error);
}

TEST_CASE("closed-form series against brute force") {
  const auto q = ChiPolynomial::quintic();
  for (double h : {0.05, 0.3, 1.0, 4.0}) {
    const long double direct = oracle::brute_series(quintic_ld, h, 4000);
    CHECK(std::exp(cy_log_series(q, h)) == Approx(static_cast<double>(direct)).epsilon(1e-12));
    CHECK(cy_series_sum(q, h) == Approx(static_cast<double>(direct)).epsilon(1e-11));
  }
  const ChiPolynomial quartic({Rational(1), Rational(0), Rational(2), Rational(0), Rational(1, 3)});
  for (double h : {0.1, 1.5}) {
    auto f = [](long double k) { return 1.0L + 2.0L * k * k + k * k * k * k / 3.0L; };
    CHECK(std::exp(cy_log_series(quartic, h)) ==
          Approx(static_cast<double>(oracle::brute_series(f, h, 4000))).epsilon(1e-12));
  }
}

TEST_CASE("cy solver") {
  const auto q = ChiPolynomial::quintic();
  for (double t : {-10.0, 0.0, 10.0}) CHECK(cy_relative_residual(q, 3, t, cy_entropy(q, 3, t)) <= 1e-10);
  CHECK(cy_entropy(q, 3, -5) > cy_entropy(q, 3, 0));
  CHECK(cy_entropy(q, 3, 0) > cy_entropy(q, 3, 5));
  const double s = cy_entropy(q, 3, -40) / -40;
  CHECK(s >= -2.1);
  CHECK(s <= -1.9);
  // Agreement with the direct series where it is practical.
  for (double t : {-3.0, 0.0, 1.0}) {
    const double h = cy_entropy(q, 3, t);
    CHECK(cy_series_sum(q, h) == Approx(std::exp(2.0 * t)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(cy_entropy(q, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(cy_entropy(q, 4, 0.0), std::invalid_argument);

  const ChiPolynomial quartic({Rational(0), Rational(1), Rational(0), Rational(1), Rational(1, 12)});
  for (double t : {-40.0, -1.0, 0.0, 2.0, 40.0}) {
    const double h = cy_entropy(quartic, 4, t);
    CHECK(h > 0.0);
    CHECK(cy_relative_residual(quartic, 4, t, h) <= 1e-10);
  }
}

TEST_CASE("cy curve over the default grid") {
  const auto q = ChiPolynomial::load(kChiFile);
  const auto c = cy_curve(q, 3);
  CHECK(c.min_second_difference() >= -1e-9);
  for (std::size_t i = 0; i < c.t.size(); ++i) CHECK(cy_relative_residual(q, 3, c.t[i], c.h[i]) <= 1e-10);
  CHECK(std::abs(slope_at_infinity(c, Side::Plus, 40)) <= 0.05);
  CHECK(std::abs(slope_at_infinity(c, Side::Minus, 40) + 2.0) <= 0.1);
  CHECK(check_entropy_bounds(c, -2, 0, c.at(0.0), 1e-6).ok());
}

TEST_CASE("slope at infinity") {
  const auto s3 = spherical_twist_curve(3);
  CHECK(slope_at_infinity(s3, Side::Minus, -100) == -2.0);
  CHECK(slope_at_infinity(s3, Side::Plus, 100) == 0.0);
  CHECK(slope_at_infinity(p_twist_curve(2), Side::Minus, 50) == -4.0);
  CHECK_THROWS_AS(slope_at_infinity(s3, Side::Plus, 5), std::invalid_argument);
}

TEST_CASE("legendre") {
  const auto s3 = spherical_twist_curve(3);
  const auto lt = legendre(s3, -2, 0);
  CHECK(lt.domain_low == -2.0);
  CHECK(lt.domain_high == 0.0);
  CHECK(lt.numeric_low == -2.0);
  CHECK(lt.numeric_high == 0.0);
  CHECK(lt.t_star.size() == 200);
  for (double v : lt.values) CHECK(v == Approx(0.0).epsilon(1e-12));
  CHECK(lt.min_value == 0.0);

  CHECK_THROWS_AS(legendre(s3, -3, 0), std::domain_error);
  CHECK_THROWS_AS(legendre(s3, 0, -1), std::invalid_argument);

  // h* >= -h0 everywhere, min = -h0.
  const auto q = ChiPolynomial::quintic();
  const auto c = cy_curve(q, 3);
  const double h0 = c.at(0.0);
  const auto lc = legendre(c, -2, 0, {200, 0.05});
  for (double v : lc.values) CHECK(v >= -h0 - 1e-12);
  CHECK(lc.min_value == Approx(-h0).epsilon(1e-9));
  CHECK(std::abs(lc.numeric_low + 2.0) <= 0.05);
  CHECK(std::abs(lc.numeric_high) <= 0.05);

  // Shift: (h + k t)* (t*) = h*(t* - k).
  for (double k : {-2.0, -1.0, 0.5, 1.0, 3.0}) {
    for (const EntropyCurve* base : {&s3, &c}) {
      const auto sh = shifted_curve(*base, k);
      const auto lb = legendre(*base, -2, 0, {200, 0.05});
      const auto ls = legendre(sh, -2 + k, k, {200, 0.05});
      for (std::size_t i = 0; i < ls.t_star.size(); ++i) {
        CHECK(ls.t_star[i] == Approx(lb.t_star[i] + k).epsilon(1e-12));
        CHECK(ls.values[i] == Approx(lb.values[i]).epsilon(1e-9));
      }
      CHECK(ls.min_value == Approx(lb.min_value).epsilon(1e-9));
    }
  }
}

TEST_CASE("entropy bounds") {
  for (int n = 2; n <= 6; ++n) {
    const auto r = check_entropy_bounds(spherical_twist_curve(n), 1 - n, 0, 0);
    CHECK(r.ok());
    CHECK(r.worst_slack == 0.0);
    CHECK(check_entropy_bounds(p_twist_curve(n), -2 * n, 0, 0).ok());
  }
  CHECK(check_entropy_bounds(zero_curve(), 0, 0, 0).ok());
  // Wrong tau is caught.
  const auto bad = check_entropy_bounds(spherical_twist_curve(3), -1, 0, 0);
  CHECK_FALSE(bad.ok());
  CHECK(bad.violations.front().bound == "upper");
}
