#include "shiftnum/orthog.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace shiftnum::orthog {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double form_sign(Eigen::Index i) { return i < 2 ? 1.0 : -1.0; }

void require_same_dim(const RMatrix& g, const QuadraticSpace& space) {
  if (g.rows() != space.dim() || g.cols() != space.dim())
    throw std::invalid_argument("matrix size does not match the quadratic space");
}

double generator_residual(const QuadraticSpace& space, const RMatrix& x) {
  const RMatrix j = space.gram();
  return (x.transpose() * j + j * x).norm();
}

// arg <g_t v, w0> along a path.  Inside a piece g_t = P exp(t s X), and
// <P y, w0> = <y, P^-1 w0>: pulling w0 back keeps the moving vector
// y = exp(t s X) v of moderate size, while P^-1 w0 can be renormalized freely.
// Tracking P v directly instead loses every digit once P is strongly
// hyperbolic.
struct Unwrapper {
  PhiOptions options;
  CVector v;
  CVector w;  // P^-1 w0, unit length
  double turns = 0.0;

  std::complex<double> value(const RMatrix& x, double s, double t) const {
    const CVector y = (t * s * x).exp().cast<std::complex<double>>() * v;
    const std::complex<double> f = pairing(y, w);
    if (std::abs(f) < 1e-12 * y.norm()) throw std::domain_error("j vanishes along the path");
    return f;
  }

  void segment(const RMatrix& x, double s, double t0, double t1, std::complex<double> f0,
               std::complex<double> f1, int depth) {
    const double d = std::arg(f1 / f0) / kTwoPi;
    if (std::abs(d) >= options.refine_turns && depth < options.max_depth) {
      const double tm = 0.5 * (t0 + t1);
      const std::complex<double> fm = value(x, s, tm);
      segment(x, s, t0, tm, f0, fm, depth + 1);
      segment(x, s, tm, t1, fm, f1, depth + 1);
      return;
    }
    if (std::abs(d) >= options.max_turns)
      throw std::domain_error("argument jump of " + std::to_string(d) +
                              " turns survives refinement");
    turns += d;
  }

  void piece(const PathPiece& p) {
    const double speed = std::abs(p.parameter) * p.generator.operatorNorm();
    const long n = std::max(1L, static_cast<long>(std::ceil(speed / 0.05)));
    std::complex<double> f0 = value(p.generator, p.parameter, 0.0);
    for (long k = 1; k <= n; ++k) {
      const double t0 = static_cast<double>(k - 1) / static_cast<double>(n);
      const double t1 = static_cast<double>(k) / static_cast<double>(n);
      const std::complex<double> f1 = value(p.generator, p.parameter, t1);
      segment(p.generator, p.parameter, t0, t1, f0, f1, 0);
      f0 = f1;
    }
    // Rebase: P <- P exp(s X).  The pairing at the seam changes by a
    // positive factor only, so the argument carries over unchanged.
    w = (-p.parameter * p.generator).exp().cast<std::complex<double>>() * w;
    w /= w.norm();
  }
};

}  // namespace

QuadraticSpace::QuadraticSpace(int rho) : rho_(rho) {
  if (rho < 1) throw std::invalid_argument("rho must be >= 1");
}

RMatrix QuadraticSpace::gram() const {
  RMatrix j = RMatrix::Zero(dim(), dim());
  for (Eigen::Index i = 0; i < dim(); ++i) j(i, i) = form_sign(i);
  return j;
}

double QuadraticSpace::form_residual(const RMatrix& g) const {
  require_same_dim(g, *this);
  const RMatrix j = gram();
  return (g.transpose() * j * g - j).norm();
}

std::complex<double> pairing(const CVector& a, const CVector& b) {
  if (a.size() != b.size() || a.size() < 3) throw std::invalid_argument("pairing size mismatch");
  std::complex<double> acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += form_sign(i) * a(i) * b(i);
  return acc;
}

double pairing(const RVector& a, const RVector& b) {
  if (a.size() != b.size() || a.size() < 3) throw std::invalid_argument("pairing size mismatch");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += form_sign(i) * a(i) * b(i);
  return acc;
}

PeriodVector::PeriodVector(CVector vec) : v(std::move(vec)) {
  const double scale = v.squaredNorm();
  if (!(scale > 0.0)) throw std::invalid_argument("period vector must be nonzero");
  if (std::abs(pairing(v, v)) > 1e-12 * scale)
    throw std::invalid_argument("period vector must satisfy <v,v> = 0");
  if (!(pairing(v, CVector(v.conjugate())).real() > 1e-12 * scale))
    throw std::invalid_argument("period vector must satisfy <v,conj v> > 0");
}

IsotropicVector::IsotropicVector(RVector vec) : w(std::move(vec)) {
  const double scale = w.squaredNorm();
  if (!(scale > 0.0)) throw std::invalid_argument("isotropic vector must be nonzero");
  if (std::abs(pairing(w, w)) > 1e-12 * scale)
    throw std::invalid_argument("vector is not isotropic");
}

Basepoint standard_basepoint(const QuadraticSpace& space) {
  CVector v = CVector::Zero(space.dim());
  v(0) = 1.0;
  v(1) = std::complex<double>(0.0, 1.0);
  RVector w = RVector::Zero(space.dim());
  w(0) = 1.0;
  w(2) = 1.0;
  return {PeriodVector(std::move(v)), IsotropicVector(std::move(w))};
}

std::complex<double> j_value(const RMatrix& g, const PeriodVector& v, const IsotropicVector& w0) {
  const CVector w = w0.w.cast<std::complex<double>>();
  const std::complex<double> den = pairing(v.v, w);
  if (std::abs(den) < 1e-12) throw std::domain_error("<v, w0> vanishes");
  const std::complex<double> j = pairing(CVector(g.cast<std::complex<double>>() * v.v), w) / den;
  if (std::abs(j) < 1e-12) throw std::domain_error("j vanishes");
  return j;
}

double cocycle_check(const RMatrix& g1, const RMatrix& g2, const PeriodVector& v,
                     const IsotropicVector& w0) {
  const PeriodVector g2v(g2.cast<std::complex<double>>() * v.v);
  return std::abs(j_value(g1 * g2, v, w0) - j_value(g1, g2v, w0) * j_value(g2, v, w0));
}

RMatrix lie_generator(const QuadraticSpace& space, int i, int j) {
  if (i < 0 || j <= i || j >= space.dim()) throw std::invalid_argument("need 0 <= i < j < dim");
  RMatrix x = RMatrix::Zero(space.dim(), space.dim());
  x(j, i) = form_sign(i);
  x(i, j) = -form_sign(j);
  return x;
}

RMatrix rotation12(const QuadraticSpace& space, double theta) {
  return (theta * lie_generator(space, 0, 1)).exp();
}

RMatrix boost13(const QuadraticSpace& space, double t) {
  return (t * lie_generator(space, 0, 2)).exp();
}

IsometryPath::IsometryPath(const QuadraticSpace& space) : space_(space) {}

IsometryPath IsometryPath::one_parameter(const QuadraticSpace& space, const RMatrix& generator,
                                         double parameter) {
  require_same_dim(generator, space);
  if (generator_residual(space, generator) > 1e-12 * (1.0 + generator.norm()))
    throw std::invalid_argument("generator does not preserve the form");
  IsometryPath p(space);
  p.pieces_.push_back({generator, parameter});
  return p;
}

IsometryPath IsometryPath::rotation(const QuadraticSpace& space, double theta) {
  return one_parameter(space, lie_generator(space, 0, 1), theta);
}

IsometryPath IsometryPath::boost(const QuadraticSpace& space, double t) {
  return one_parameter(space, lie_generator(space, 0, 2), t);
}

RMatrix IsometryPath::endpoint() const {
  RMatrix g = RMatrix::Identity(space_.dim(), space_.dim());
  for (const auto& piece : pieces_) g = g * (piece.parameter * piece.generator).exp();
  return g;
}

IsometryPath IsometryPath::inverse() const {
  IsometryPath p(space_);
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it)
    p.pieces_.push_back({it->generator, -it->parameter});
  return p;
}

IsometryPath IsometryPath::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  IsometryPath p(space_);
  for (int i = 0; i < n; ++i) p.pieces_.insert(p.pieces_.end(), pieces_.begin(), pieces_.end());
  return p;
}

std::vector<RMatrix> IsometryPath::steps(double max_distance) const {
  if (!(max_distance > 0.0)) throw std::invalid_argument("max_distance must be positive");
  std::vector<RMatrix> out{RMatrix::Identity(space_.dim(), space_.dim())};
  for (const auto& piece : pieces_) {
    const RMatrix start = out.back();
    const double speed = std::abs(piece.parameter) * piece.generator.operatorNorm();
    long n = std::max(1L, static_cast<long>(std::ceil(2.0 * speed / max_distance)));
    for (;;) {
      std::vector<RMatrix> chunk;
      RMatrix g = start;
      bool ok = true;
      for (long k = 1; k <= n && ok; ++k) {
        RMatrix next = start * (piece.parameter * static_cast<double>(k) /
                                static_cast<double>(n) * piece.generator)
                                   .exp();
        ok = (next - g).operatorNorm() < max_distance;
        g = next;
        chunk.push_back(std::move(next));
      }
      if (ok) {
        out.insert(out.end(), chunk.begin(), chunk.end());
        break;
      }
      n *= 2;
      if (n > (1L << 24)) throw std::runtime_error("path steps do not converge");
    }
  }
  return out;
}

double IsometryPath::max_form_residual() const {
  double worst = 0.0;
  for (const auto& g : steps()) worst = std::max(worst, space_.form_residual(g));
  return worst;
}

IsometryPath compose_paths(const IsometryPath& p1, const IsometryPath& p2) {
  if (p1.space_.rho() != p2.space_.rho()) throw std::invalid_argument("paths live in different spaces");
  IsometryPath p = p1;
  p.pieces_.insert(p.pieces_.end(), p2.pieces_.begin(), p2.pieces_.end());
  return p;
}

IsometryPath central_loop(const QuadraticSpace& space) {
  return IsometryPath::rotation(space, -kTwoPi);
}

double phi_lift(const IsometryPath& path, const PeriodVector& v, const IsotropicVector& w0,
                const PhiOptions& options) {
  if (v.v.size() != path.space().dim() || w0.w.size() != path.space().dim())
    throw std::invalid_argument("basepoint dimension mismatch");
  const CVector w = w0.w.cast<std::complex<double>>();
  if (std::abs(pairing(v.v, w)) < 1e-12) throw std::domain_error("<v, w0> vanishes");
  Unwrapper uw{options, v.v, w / w.norm()};
  for (const auto& piece : path.pieces()) uw.piece(piece);
  return uw.turns;
}

double homogenize_phi(const IsometryPath& path, const PeriodVector& v, const IsotropicVector& w0,
                      int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return phi_lift(path.pow(n), v, w0) / n;
}

IsometryPath random_isometry_path(const QuadraticSpace& space, std::mt19937_64& rng, int factors) {
  if (factors < 0) throw std::invalid_argument("factors must be >= 0");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> param(-2.0, 2.0);
  IsometryPath p(space);
  for (int f = 0; f < factors; ++f) {
    RMatrix x = RMatrix::Zero(space.dim(), space.dim());
    for (int i = 0; i < space.dim(); ++i)
      for (int j = i + 1; j < space.dim(); ++j) x += gauss(rng) * lie_generator(space, i, j);
    x /= x.norm();
    p = compose_paths(p, IsometryPath::one_parameter(space, x, param(rng)));
  }
  return p;
}

DefectReport defect_experiment(const QuadraticSpace& space, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  std::mt19937_64 rng(seed);
  const Basepoint bp = standard_basepoint(space);
  DefectReport r;
  r.rho = space.rho();
  r.samples = samples;
  r.bound = space.rho() + 3.0;
  r.min_abs_j = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const IsometryPath p1 = random_isometry_path(space, rng);
    const IsometryPath p2 = random_isometry_path(space, rng);
    const IsometryPath p12 = compose_paths(p1, p2);
    const double d = phi_lift(p12, bp.v, bp.w0) - phi_lift(p1, bp.v, bp.w0) -
                     phi_lift(p2, bp.v, bp.w0);
    r.max_defect = std::max(r.max_defect, std::abs(d));

    const RMatrix g1 = p1.endpoint(), g2 = p2.endpoint();
    r.max_cocycle_residual = std::max(r.max_cocycle_residual, cocycle_check(g1, g2, bp.v, bp.w0));
    r.max_form_residual =
        std::max({r.max_form_residual, p1.max_form_residual(), p2.max_form_residual()});
    for (const RMatrix* g : {&g1, &g2})
      r.min_abs_j = std::min(r.min_abs_j, std::abs(j_value(*g, bp.v, bp.w0)));
    r.min_abs_j = std::min(r.min_abs_j, std::abs(j_value(g1 * g2, bp.v, bp.w0)));
  }
  r.pass = r.max_defect <= r.bound + 1e-6 && r.max_cocycle_residual <= 1e-9 &&
           r.max_form_residual <= 1e-9;
  return r;
}

}  // namespace shiftnum::orthog
