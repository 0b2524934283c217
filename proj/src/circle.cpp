#include "shiftnum/circle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace shiftnum::circle {

namespace {

double mod2(double x) {
  double r = x - 2.0 * std::floor(x / 2.0);
  return r >= 2.0 ? 0.0 : r;
}

Eigen::Vector2d ray_direction(double phi) {
  return {std::cos(std::numbers::pi * phi), std::sin(std::numbers::pi * phi)};
}

}  // namespace

double ray_angle(const Eigen::Vector2d& v) {
  return mod2(std::atan2(v.y(), v.x()) / std::numbers::pi);
}

LiftedRayMap::LiftedRayMap(const Eigen::Matrix2d& t, std::int64_t lift_offset)
    : t_(t), offset_(lift_offset) {
  if (!(t.determinant() > 0.0))
    throw std::invalid_argument("lifted ray map needs det T > 0");
  base0_ = ray_angle(t_.col(0));
  const double off = static_cast<double>(offset_);
  f0_ = off + mod2(base0_ - off);
}

LiftedRayMap LiftedRayMap::with_value_at_zero(const Eigen::Matrix2d& t, double f0) {
  if (!(t.determinant() > 0.0))
    throw std::invalid_argument("lifted ray map needs det T > 0");
  const double base = ray_angle(t.col(0));
  const auto turns = static_cast<std::int64_t>(std::llround((f0 - base) / 2.0));
  return {t, 2 * turns};
}

LiftedRayMap LiftedRayMap::rotation(double angle, std::int64_t lift_offset) {
  Eigen::Matrix2d t;
  t << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return {t, lift_offset};
}

double LiftedRayMap::operator()(double phi) const {
  // Antipodal rays map to antipodal rays, so f(phi + 1) = f(phi) + 1 and
  // the increment over a half turn [0, 1) stays in [0, 1).
  const double k = std::floor(phi);
  const double r = phi - k;
  double delta = mod2(ray_angle(t_ * ray_direction(r)) - base0_);
  if (delta >= 1.5) delta -= 2.0;
  return f0_ + k + delta;
}

LiftedRayMap LiftedRayMap::inverse() const {
  // Solve f(x) = 0; f(x) - x stays within 2 of f(0).
  double lo = -f0_ - 2.0, hi = -f0_ + 2.0;
  while ((*this)(lo) > 0.0) lo -= 2.0;
  while ((*this)(hi) < 0.0) hi += 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++i) {
    double mid = 0.5 * (lo + hi);
    if ((*this)(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return with_value_at_zero(t_.inverse(), 0.5 * (lo + hi));
}

LiftedRayMap compose_lifts(const LiftedRayMap& g1, const LiftedRayMap& g2) {
  return LiftedRayMap::with_value_at_zero(g1.matrix() * g2.matrix(), g1(g2(0.0)));
}

LiftedCircleMap LiftedCircleMap::translation(double k, double period) {
  return {[k](double x) { return x + k; }, period};
}

LiftedCircleMap LiftedCircleMap::piecewise_linear(std::vector<std::pair<double, double>> knots,
                                                  double period) {
  if (knots.size() < 2) throw std::invalid_argument("need at least two knots");
  if (knots.front().first != 0.0 || knots.back().first != period)
    throw std::invalid_argument("knots must span [0, period]");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first) || !(knots[i].second > knots[i - 1].second))
      throw std::invalid_argument("knot table must be strictly increasing");
  }
  if (std::abs(knots.back().second - knots.front().second - period) > 1e-12)
    throw std::invalid_argument("table must advance by exactly one period");
  return {[knots = std::move(knots), period](double x) {
            const double m = std::floor(x / period);
            const double r = x - m * period;
            std::size_t i = 1;
            while (i + 1 < knots.size() && knots[i].first <= r) ++i;
            const auto& [x0, y0] = knots[i - 1];
            const auto& [x1, y1] = knots[i];
            return y0 + (y1 - y0) * (r - x0) / (x1 - x0) + m * period;
          },
          period};
}

LiftedCircleMap LiftedCircleMap::from_ray_map(const LiftedRayMap& g) {
  return {[g](double x) { return g(x); }, kRayPeriod};
}

LiftedCircleMap LiftedCircleMap::compose(const LiftedCircleMap& inner) const {
  if (inner.period_ != period_) throw std::invalid_argument("period mismatch");
  return {[outer = f_, in = inner.f_](double x) { return outer(in(x)); }, period_};
}

LiftedCircleMap LiftedCircleMap::pow(int n) const {
  if (n < 1) throw std::invalid_argument("pow needs n >= 1");
  return {[f = f_, n](double x) {
            for (int i = 0; i < n; ++i) x = f(x);
            return x;
          },
          period_};
}

double translation_number_numeric(const LiftedCircleMap& f, double x0, long iters) {
  if (iters < 1) throw std::invalid_argument("iters must be >= 1");
  const double p = f.period();
  double x = x0;
  long double turns = 0;
  for (long i = 0; i < iters; ++i) {
    const double y = f(x);
    const double k = std::floor(y / p);
    x = y - k * p;
    turns += k;
  }
  return static_cast<double>((static_cast<long double>(x) + turns * p - x0) / iters);
}

double translation_number_weighted(const LiftedCircleMap& f, double x0, long iters) {
  if (iters < 1) throw std::invalid_argument("iters must be >= 1");
  const double p = f.period();
  double x = x0;
  long double sum_w = 0, sum_wd = 0;
  for (long i = 0; i < iters; ++i) {
    const double y = f(x);
    const double t = static_cast<double>(i + 1) / static_cast<double>(iters + 1);
    const double w = std::exp(-1.0 / (t * (1.0 - t)));
    sum_w += w;
    sum_wd += w * (y - x);
    x = y - std::floor(y / p) * p;
  }
  return static_cast<double>(sum_wd / sum_w);
}

double translation_number_exact(const LiftedRayMap& g) {
  const Eigen::Matrix2d& t = g.matrix();
  const double det = t.determinant();
  if (!(det > 0.0)) throw std::invalid_argument("translation number needs det T > 0");
  const double tr = t.trace();
  const double disc = tr * tr - 4.0 * det;

  // Rounding can push a parabolic trace just inside the elliptic range, where
  // acos would amplify it; rotations by less than ~1e-7 rad land here too.
  if (disc < -1e-13 * det) {
    // Conjugate to a rotation by theta in (0, pi), counterclockwise iff the
    // lower-left entry is positive.  The displacement never crosses an
    // integer, so the answer lies in (floor f(0), floor f(0) + 1).
    const double c = std::clamp(tr / (2.0 * std::sqrt(det)), -1.0, 1.0);
    const double frac = std::acos(c) / std::numbers::pi;
    const double k = std::floor(g.value_at_zero());
    return t(1, 0) > 0.0 ? k + frac : k + 1.0 - frac;
  }

  // Real spectrum: a fixed ray phi* gives f(phi*) - phi* in Z.
  Eigen::Vector2d v(1.0, 0.0);
  if (t(1, 0) != 0.0) {
    const double lambda = 0.5 * (tr + std::sqrt(std::max(disc, 0.0)));
    v = {lambda - t(1, 1), t(1, 0)};
  }
  const double phi = ray_angle(v);
  return std::round(g(phi) - phi);
}

std::int64_t dhkk_tau(const LiftedRayMap& g) {
  const Eigen::Matrix2d& t = g.matrix();
  if (t(0, 1) != 0.0 || t(1, 0) != 0.0)
    throw std::invalid_argument("pseudo-Anosov datum must be diagonal");
  const double r1 = t(0, 0), r2 = t(1, 1);
  if (std::abs(r1 * r2 - 1.0) > 1e-12)
    throw std::invalid_argument("pseudo-Anosov datum must be diag(r, 1/r)");
  if (!(std::max(std::abs(r1), std::abs(r2)) > 1.0))
    throw std::invalid_argument("pseudo-Anosov datum needs |r| > 1");
  return std::llround(g.value_at_zero());
}

LiftedRayMap random_lifted_ray_map(std::mt19937_64& rng, MatrixKind kind) {
  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  Eigen::Matrix2d p;
  do {
    p << entry(rng), entry(rng), entry(rng), entry(rng);
  } while (p.determinant() < 0.2);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  const double scale = 0.5 + 1.5 * unit(rng);
  const double sign = coin(rng) ? 1.0 : -1.0;
  Eigen::Matrix2d m;
  switch (kind) {
    case MatrixKind::Elliptic: {
      const double theta = (0.02 + 0.96 * unit(rng)) * std::numbers::pi * sign;
      m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
      break;
    }
    case MatrixKind::Parabolic:
      m << sign, entry(rng), 0.0, sign;
      break;
    case MatrixKind::Hyperbolic: {
      const double lambda = 1.1 + 2.0 * unit(rng);
      m << sign * lambda, 0.0, 0.0, sign / lambda;
      break;
    }
  }
  m *= scale;
  const double f0 = -4.0 + 8.0 * unit(rng);
  return LiftedRayMap::with_value_at_zero(p * m * p.inverse(), f0);
}

}  // namespace shiftnum::circle
