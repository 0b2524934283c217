#ifndef SHIFTNUM_ENTROPY_HPP
#define SHIFTNUM_ENTROPY_HPP

// Closed-form categorical entropy curves, the catalog of known shifting
// numbers, the Calabi-Yau entropy equation, Legendre transforms and the
// shifting-number bounds on entropy.

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "shiftnum/circle.hpp"
#include "shiftnum/numeric.hpp"

namespace shiftnum::entropy {

struct Grid {
  double tmin = -40.0;
  double tmax = 40.0;
  double step = 0.5;

  std::vector<double> points() const;
};

/// A sampled convex function t -> h_t.
struct EntropyCurve {
  std::function<double(double)> eval;
  std::vector<double> t;
  std::vector<double> h;

  /// Evaluates `f` on `grid` and checks convexity (second differences
  /// >= -1e-9) and h_0 >= 0 when 0 lies in the grid.
  static EntropyCurve sample(std::function<double(double)> f, const Grid& grid);

  double at(double t_value) const { return eval(t_value); }
  double min_second_difference() const;
};

double spherical_twist_entropy(int n, double t);
double p_twist_entropy(int n, double t);

EntropyCurve spherical_twist_curve(int n, const Grid& grid = {});
EntropyCurve p_twist_curve(int n, const Grid& grid = {});
EntropyCurve zero_curve(const Grid& grid = {});
/// h_t + k t, the entropy of F composed with [k].
EntropyCurve shifted_curve(const EntropyCurve& curve, double k);

// Catalog ------------------------------------------------------------------

struct StandardAutoeq { std::int64_t shift = 0; };
struct SphericalTwist { int n = 2; };
struct PTwist { int n = 1; };
struct DhkkPseudoAnosov { circle::LiftedRayMap g; };

using CatalogEntry = std::variant<StandardAutoeq, SphericalTwist, PTwist, DhkkPseudoAnosov>;

struct TauRange {
  double minus = 0.0;
  double plus = 0.0;
  double average() const { return 0.5 * (minus + plus); }
};

TauRange catalog_tau(const CatalogEntry& entry);

// Calabi-Yau entropy equation ----------------------------------------------

/// k -> chi(O(k)) as a polynomial with rational coefficients c_0..c_N.
class ChiPolynomial {
 public:
  /// Throws std::invalid_argument unless the leading coefficient is positive
  /// and chi(k) > 0 for 1 <= k <= 1000.
  explicit ChiPolynomial(std::vector<Rational> coefficients);

  /// One decimal rational per line, lowest degree first.  Blank lines and
  /// lines starting with '#' are skipped.
  static ChiPolynomial load(const std::string& path);
  /// 5k^3/6 + 25k/6, Riemann-Roch for the quintic threefold.
  static ChiPolynomial quintic();

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  Rational operator()(const BigInt& k) const;
  double value(double k) const;

 private:
  std::vector<Rational> coeffs_;
};

/// log sum_{k>=1} chi(k) e^{-hk}, in closed form through the Eulerian
/// polynomials (sum k^l q^k = q A_l(q) / (1-q)^{l+1}).
double cy_log_series(const ChiPolynomial& chi, double h);

/// Direct partial sums of sum chi(k) e^{-hk}, stopped when a geometric
/// tail bound falls below rel_tol of the partial sum.  Practical for
/// h >= 1e-3.
double cy_series_sum(const ChiPolynomial& chi, double h, double rel_tol = 1e-12);

/// The unique h > 0 with sum chi(k) e^{-hk} = e^{(N-1)t}.  Throws
/// std::invalid_argument if deg chi != N or N < 3, std::runtime_error if
/// the bracket cannot be established.
double cy_entropy(const ChiPolynomial& chi, int n, double t);

/// |sum chi(k) e^{-hk} / e^{(N-1)t} - 1|.
double cy_relative_residual(const ChiPolynomial& chi, int n, double t, double h);

EntropyCurve cy_curve(const ChiPolynomial& chi, int n, const Grid& grid = {});

// Asymptotics, Legendre transform, bounds ----------------------------------

enum class Side { Plus, Minus };

/// h(t)/t at t = +-|t_probe|.  Requires |t_probe| >= 10.
double slope_at_infinity(const EntropyCurve& curve, Side side, double t_probe);

struct LegendreOptions {
  int points = 200;
  double domain_tolerance = 1e-6;
};

struct LegendreResult {
  double domain_low = 0.0;   // claimed tau-
  double domain_high = 0.0;  // claimed tau+
  double numeric_low = 0.0;  // slope of the first chord of the sample grid
  double numeric_high = 0.0; // slope of the last chord
  std::vector<double> t_star;
  std::vector<double> values;
  double min_value = 0.0;
  double argmin = 0.0;

  /// sup over the sample grid of t* t - h_t.
  double eval(double t_star_value) const;

  std::vector<double> grid_t;
  std::vector<double> grid_h;
};

/// Legendre transform of a sampled curve on [tau_minus, tau_plus].  Throws
/// std::domain_error if the claimed domain reaches beyond the range of
/// slopes where the supremum is attained (outside domain_tolerance).
LegendreResult legendre(const EntropyCurve& curve, double tau_minus, double tau_plus,
                        const LegendreOptions& options = {});

struct BoundViolation {
  double t = 0.0;
  std::string bound;  // "lower" or "upper"
  double amount = 0.0;
};

struct BoundReport {
  double worst_slack = 0.0;
  std::vector<BoundViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks t tau+ <= h_t <= h_0 + t tau+ for t >= 0 and the mirrored bounds
/// with tau- for t <= 0.
BoundReport check_entropy_bounds(const EntropyCurve& curve, double tau_minus, double tau_plus,
                                 double h0, double tolerance = 1e-9);

}  // namespace shiftnum::entropy

#endif
