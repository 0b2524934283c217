#include "shiftnum/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace shiftnum::entropy {

namespace {

// Eulerian polynomial coefficients A(l, m), m = 0..l-1 (A_0 = 1).
std::vector<std::vector<double>> eulerian_table(int max_degree) {
  std::vector<std::vector<double>> a(static_cast<std::size_t>(max_degree) + 1);
  a[0] = {1.0};
  for (int n = 1; n <= max_degree; ++n) {
    auto& row = a[static_cast<std::size_t>(n)];
    row.assign(static_cast<std::size_t>(n), 0.0);
    const auto& prev = a[static_cast<std::size_t>(n) - 1];
    for (int m = 0; m < n; ++m) {
      const auto mu = static_cast<std::size_t>(m);
      const double left = m >= 1 ? prev[mu - 1] : 0.0;
      const double right = mu < prev.size() ? prev[mu] : 0.0;
      row[mu] = (n - m) * left + (m + 1) * right;
    }
  }
  return a;
}

double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

std::vector<double> Grid::points() const {
  if (!(step > 0.0) || !(tmax >= tmin)) throw std::invalid_argument("bad grid");
  const auto n = static_cast<long>(std::llround((tmax - tmin) / step));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) out.push_back(tmin + static_cast<double>(i) * step);
  return out;
}

EntropyCurve EntropyCurve::sample(std::function<double(double)> f, const Grid& grid) {
  EntropyCurve c;
  c.t = grid.points();
  c.h.reserve(c.t.size());
  for (double tv : c.t) c.h.push_back(f(tv));
  c.eval = std::move(f);
  if (c.min_second_difference() < -1e-9)
    throw std::domain_error("entropy curve is not convex on its grid");
  for (std::size_t i = 0; i < c.t.size(); ++i)
    if (c.t[i] == 0.0 && c.h[i] < -1e-12) throw std::domain_error("h_0 must be nonnegative");
  return c;
}

double EntropyCurve::min_second_difference() const {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < h.size(); ++i) {
    // Normalized to a uniform-grid second difference.
    const double left = (h[i] - h[i - 1]) / (t[i] - t[i - 1]);
    const double right = (h[i + 1] - h[i]) / (t[i + 1] - t[i]);
    worst = std::min(worst, (right - left) * 0.5 * (t[i + 1] - t[i - 1]));
  }
  return worst;
}

double spherical_twist_entropy(int n, double t) {
  if (n < 2) throw std::invalid_argument("spherical twist needs N >= 2");
  return t <= 0.0 ? (1.0 - n) * t : 0.0;
}

double p_twist_entropy(int n, double t) {
  if (n < 1) throw std::invalid_argument("P-twist needs N >= 1");
  return t <= 0.0 ? -2.0 * n * t : 0.0;
}

EntropyCurve spherical_twist_curve(int n, const Grid& grid) {
  spherical_twist_entropy(n, 0.0);
  return EntropyCurve::sample([n](double t) { return spherical_twist_entropy(n, t); }, grid);
}

EntropyCurve p_twist_curve(int n, const Grid& grid) {
  p_twist_entropy(n, 0.0);
  return EntropyCurve::sample([n](double t) { return p_twist_entropy(n, t); }, grid);
}

EntropyCurve zero_curve(const Grid& grid) {
  return EntropyCurve::sample([](double) { return 0.0; }, grid);
}

EntropyCurve shifted_curve(const EntropyCurve& curve, double k) {
  EntropyCurve out;
  out.t = curve.t;
  out.h.reserve(curve.h.size());
  for (std::size_t i = 0; i < curve.t.size(); ++i) out.h.push_back(curve.h[i] + k * curve.t[i]);
  out.eval = [f = curve.eval, k](double t) { return f(t) + k * t; };
  return out;
}

TauRange catalog_tau(const CatalogEntry& entry) {
  return std::visit(
      [](const auto& e) -> TauRange {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, StandardAutoeq>) {
          auto s = static_cast<double>(e.shift);
          return {s, s};
        } else if constexpr (std::is_same_v<E, SphericalTwist>) {
          if (e.n < 2) throw std::invalid_argument("spherical twist needs N >= 2");
          return {1.0 - e.n, 0.0};
        } else if constexpr (std::is_same_v<E, PTwist>) {
          if (e.n < 1) throw std::invalid_argument("P-twist needs N >= 1");
          return {-2.0 * e.n, 0.0};
        } else {
          auto m = static_cast<double>(circle::dhkk_tau(e.g));
          return {m, m};
        }
      },
      entry);
}

ChiPolynomial::ChiPolynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
  while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.empty() || coeffs_.back() <= 0)
    throw std::invalid_argument("chi polynomial needs a positive leading coefficient");
  for (int k = 1; k <= 1000; ++k)
    if ((*this)(BigInt(k)) <= 0)
      throw std::invalid_argument("chi(O(k)) must be positive for k >= 1, fails at k = " +
                                  std::to_string(k));
}

ChiPolynomial ChiPolynomial::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open chi file: " + path);
  std::vector<Rational> coeffs;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    coeffs.push_back(parse_rational(line));
  }
  return ChiPolynomial(std::move(coeffs));
}

ChiPolynomial ChiPolynomial::quintic() {
  return ChiPolynomial({Rational(0), Rational(25, 6), Rational(0), Rational(5, 6)});
}

Rational ChiPolynomial::operator()(const BigInt& k) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * k + *it;
  return acc;
}

double ChiPolynomial::value(double k) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * k + it->convert_to<double>();
  return acc;
}

double cy_log_series(const ChiPolynomial& chi, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("series needs h > 0");
  const int deg = chi.degree();
  static thread_local std::vector<std::vector<double>> table;
  if (static_cast<int>(table.size()) <= deg) table = eulerian_table(std::max(deg, 8));

  const double q = std::exp(-h);
  const double one_minus_q = -std::expm1(-h);
  // sum_l c_l q A_l(q) / (1-q)^{l+1} = q (1-q)^{-(deg+1)} sum_l c_l A_l(q) (1-q)^{deg-l}
  double inner = 0.0;
  for (int l = 0; l <= deg; ++l) {
    const double c = chi.coefficients()[static_cast<std::size_t>(l)].convert_to<double>();
    if (c == 0.0) continue;
    inner += c * horner(table[static_cast<std::size_t>(l)], q) * std::pow(one_minus_q, deg - l);
  }
  if (!(inner > 0.0)) throw std::runtime_error("chi series lost positivity");
  return -h - (deg + 1) * std::log(one_minus_q) + std::log(inner);
}

double cy_series_sum(const ChiPolynomial& chi, double h, double rel_tol) {
  if (!(h > 0.0)) throw std::invalid_argument("series needs h > 0");
  double partial = 0.0;
  for (long k = 1; k < 100'000'000; ++k) {
    const double kd = static_cast<double>(k);
    partial += chi.value(kd) * std::exp(-h * kd);
    const double next = chi.value(kd + 1.0) * std::exp(-h * (kd + 1.0));
    const double ratio = chi.value(kd + 2.0) / chi.value(kd + 1.0) * std::exp(-h);
    if (ratio < 1.0 && next / (1.0 - ratio) < rel_tol * partial) return partial;
  }
  throw std::runtime_error("chi series did not converge");
}

double cy_entropy(const ChiPolynomial& chi, int n, double t) {
  if (n < 3) throw std::invalid_argument("Calabi-Yau entropy needs N >= 3");
  if (chi.degree() != n) throw std::invalid_argument("chi must have degree N");
  const double target = (n - 1) * t;
  auto excess = [&](double h) { return cy_log_series(chi, h) - target; };

  double lo = 1e-8, hi = 1.0;
  while (excess(lo) < 0.0) {
    hi = lo;
    lo *= 1e-4;
    if (lo < 1e-280) throw std::runtime_error("cy_entropy: no lower bracket");
  }
  while (excess(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("cy_entropy: no upper bracket");
  }
  for (int i = 0; i < 2000 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = hi > 4.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (excess(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return std::abs(excess(lo)) < std::abs(excess(hi)) ? lo : hi;
}

double cy_relative_residual(const ChiPolynomial& chi, int n, double t, double h) {
  return std::abs(std::expm1(cy_log_series(chi, h) - (n - 1) * t));
}

EntropyCurve cy_curve(const ChiPolynomial& chi, int n, const Grid& grid) {
  return EntropyCurve::sample([chi, n](double t) { return cy_entropy(chi, n, t); }, grid);
}

double slope_at_infinity(const EntropyCurve& curve, Side side, double t_probe) {
  if (std::abs(t_probe) < 10.0) throw std::invalid_argument("probe must satisfy |t| >= 10");
  const double t = side == Side::Plus ? std::abs(t_probe) : -std::abs(t_probe);
  return curve.at(t) / t;
}

double LegendreResult::eval(double ts) const {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_t.size(); ++i) best = std::max(best, ts * grid_t[i] - grid_h[i]);
  return best;
}

LegendreResult legendre(const EntropyCurve& curve, double tau_minus, double tau_plus,
                        const LegendreOptions& options) {
  if (tau_minus > tau_plus) throw std::invalid_argument("legendre needs tau- <= tau+");
  if (curve.t.size() < 3) throw std::invalid_argument("legendre needs at least three samples");
  if (curve.min_second_difference() < -1e-9)
    throw std::domain_error("legendre: curve is not convex");

  LegendreResult r;
  r.grid_t = curve.t;
  r.grid_h = curve.h;
  r.domain_low = tau_minus;
  r.domain_high = tau_plus;
  const std::size_t n = curve.t.size();
  r.numeric_low = (curve.h[1] - curve.h[0]) / (curve.t[1] - curve.t[0]);
  r.numeric_high = (curve.h[n - 1] - curve.h[n - 2]) / (curve.t[n - 1] - curve.t[n - 2]);
  if (tau_minus < r.numeric_low - options.domain_tolerance ||
      tau_plus > r.numeric_high + options.domain_tolerance)
    throw std::domain_error("legendre: supremum unbounded inside the claimed domain");

  const int points = std::max(options.points, 2);
  for (int i = 0; i < points; ++i) {
    const double ts = tau_minus + (tau_plus - tau_minus) * i / (points - 1);
    r.t_star.push_back(ts);
    r.values.push_back(r.eval(ts));
  }
  // The grid supremum is piecewise linear in t*, with breakpoints at the
  // chord slopes; its minimum sits at one of them or at an endpoint.
  std::vector<double> candidates = r.t_star;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double s = (curve.h[i + 1] - curve.h[i]) / (curve.t[i + 1] - curve.t[i]);
    if (s >= tau_minus && s <= tau_plus) candidates.push_back(s);
  }
  r.min_value = std::numeric_limits<double>::infinity();
  for (double c : candidates) {
    const double v = r.eval(c);
    if (v < r.min_value) {
      r.min_value = v;
      r.argmin = c;
    }
  }
  return r;
}

BoundReport check_entropy_bounds(const EntropyCurve& curve, double tau_minus, double tau_plus,
                                 double h0, double tolerance) {
  BoundReport report;
  report.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.t.size(); ++i) {
    const double t = curve.t[i];
    const double h = curve.h[i];
    auto check = [&](double tau) {
      const double lower = h - t * tau;
      const double upper = h0 + t * tau - h;
      report.worst_slack = std::min({report.worst_slack, lower, upper});
      if (lower < -tolerance) report.violations.push_back({t, "lower", -lower});
      if (upper < -tolerance) report.violations.push_back({t, "upper", -upper});
    };
    if (t >= 0.0) check(tau_plus);
    if (t <= 0.0) check(tau_minus);
  }
  return report;
}

}  // namespace shiftnum::entropy
