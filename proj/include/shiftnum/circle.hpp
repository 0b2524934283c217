#ifndef SHIFTNUM_CIRCLE_HPP
#define SHIFTNUM_CIRCLE_HPP

// Lifted circle maps and Poincare translation numbers.
//
// Rays in R^2 are parametrized by phi with direction (cos(pi phi),
// sin(pi phi)), so one full turn is phi -> phi + 2.  A pair (T, f) with
// T in GL+(2,R) and f a lift of T's action on rays is an element of the
// universal cover of GL+(2,R).

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace shiftnum::circle {

/// Period of the ray model R/2Z.
inline constexpr double kRayPeriod = 2.0;

/// Ray angle of a nonzero vector, in [0, 2).
double ray_angle(const Eigen::Vector2d& v);

class LiftedRayMap {
 public:
  /// Lift whose value at 0 lies in [lift_offset, lift_offset + 2).
  /// Throws std::invalid_argument unless det T > 0.
  LiftedRayMap(const Eigen::Matrix2d& t, std::int64_t lift_offset);

  /// The lift of T whose value at 0 is the one closest to `f0`.
  static LiftedRayMap with_value_at_zero(const Eigen::Matrix2d& t, double f0);
  static LiftedRayMap identity() { return {Eigen::Matrix2d::Identity(), 0}; }
  /// Deck transformation phi -> phi + 2k.
  static LiftedRayMap central(std::int64_t k) { return {Eigen::Matrix2d::Identity(), 2 * k}; }
  static LiftedRayMap rotation(double angle, std::int64_t lift_offset = 0);

  const Eigen::Matrix2d& matrix() const { return t_; }
  std::int64_t lift_offset() const { return offset_; }

  double operator()(double phi) const;
  double value_at_zero() const { return f0_; }

  LiftedRayMap inverse() const;

 private:
  Eigen::Matrix2d t_;
  std::int64_t offset_;
  double base0_;  // ray angle of T e1, in [0, 2)
  double f0_;
};

/// g1 after g2, with the lift fixed so that the lifted maps compose.
LiftedRayMap compose_lifts(const LiftedRayMap& g1, const LiftedRayMap& g2);

/// Increasing map of the line commuting with translation by `period`.
class LiftedCircleMap {
 public:
  LiftedCircleMap(std::function<double(double)> f, double period)
      : f_(std::move(f)), period_(period) {}

  static LiftedCircleMap translation(double k, double period = 1.0);
  /// Table (x_i, y_i) on one period: x_0 = 0 < ... < x_n = period,
  /// y strictly increasing with y_n = y_0 + period.
  static LiftedCircleMap piecewise_linear(std::vector<std::pair<double, double>> knots,
                                          double period = 1.0);
  static LiftedCircleMap from_ray_map(const LiftedRayMap& g);

  double operator()(double x) const { return f_(x); }
  double period() const { return period_; }

  LiftedCircleMap compose(const LiftedCircleMap& inner) const;
  LiftedCircleMap pow(int n) const;

 private:
  std::function<double(double)> f_;
  double period_;
};

/// (f^iters(x0) - x0) / iters, iterated with renormalization into one period.
double translation_number_numeric(const LiftedCircleMap& f, double x0, long iters);

/// Smoothly weighted Birkhoff average of the displacement f(x) - x along the
/// orbit of x0.  Converges far faster than the plain quotient for maps
/// conjugate to rotations and for maps with attracting fixed points.
double translation_number_weighted(const LiftedCircleMap& f, double x0, long iters);

/// Closed-form translation number of a lifted ray map (period-2 units).
double translation_number_exact(const LiftedRayMap& g);

/// f(0) for a pseudo-Anosov datum T = diag(r, 1/r) or diag(1/r, r), |r| > 1.
std::int64_t dhkk_tau(const LiftedRayMap& g);

enum class MatrixKind : std::uint8_t { Elliptic, Parabolic, Hyperbolic };

/// Random element of the cover of GL+(2,R) of the requested conjugacy type:
/// P * M * P^-1 with P random (det > 0) and M a scaled rotation, a signed
/// shear, or a diagonal matrix with same-sign entries.  Lift value at 0 is
/// drawn from [-4, 4).
LiftedRayMap random_lifted_ray_map(std::mt19937_64& rng, MatrixKind kind);

}  // namespace shiftnum::circle

#endif
