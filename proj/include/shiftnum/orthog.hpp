#ifndef SHIFTNUM_ORTHOG_HPP
#define SHIFTNUM_ORTHOG_HPP

// The argument quasimorphism on the universal cover of SO(2, rho).
//
// Vectors live in R^{2+rho} with the form diag(1, 1, -1, ..., -1).  An
// element of the cover is a path from the identity, stored as a product of
// one-parameter pieces exp(s X).  Phi is measured in full turns.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace shiftnum::orthog {

using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

class QuadraticSpace {
 public:
  /// Throws std::invalid_argument unless rho >= 1.
  explicit QuadraticSpace(int rho);

  int rho() const { return rho_; }
  int dim() const { return rho_ + 2; }
  RMatrix gram() const;
  /// Frobenius norm of g^T J g - J.
  double form_residual(const RMatrix& g) const;

 private:
  int rho_;
};

/// The form, extended complex-bilinearly (no conjugation).
std::complex<double> pairing(const CVector& a, const CVector& b);
double pairing(const RVector& a, const RVector& b);

/// <v, v> = 0 and <v, conj v> > 0.
struct PeriodVector {
  explicit PeriodVector(CVector vec);
  CVector v;
};

/// <w, w> = 0, w != 0.
struct IsotropicVector {
  explicit IsotropicVector(RVector vec);
  RVector w;
};

struct Basepoint {
  PeriodVector v;
  IsotropicVector w0;
};

/// v0 = e1 + i e2, w0 = e1 + e3.
Basepoint standard_basepoint(const QuadraticSpace& space);

/// <g v, w0> / <v, w0>.  Throws std::domain_error if the denominator or the
/// result has magnitude below 1e-12.
std::complex<double> j_value(const RMatrix& g, const PeriodVector& v, const IsotropicVector& w0);

/// |j(g1 g2; v) - j(g1; g2 v) j(g2; v)|.
double cocycle_check(const RMatrix& g1, const RMatrix& g2, const PeriodVector& v,
                     const IsotropicVector& w0);

/// E_ji J_ii - E_ij J_jj (0-based i < j): the infinitesimal rotation or boost
/// in the (e_i, e_j)-plane.
RMatrix lie_generator(const QuadraticSpace& space, int i, int j);
RMatrix rotation12(const QuadraticSpace& space, double theta);
RMatrix boost13(const QuadraticSpace& space, double t);

struct PathPiece {
  RMatrix generator;
  double parameter = 0.0;
};

/// t -> exp(s1 X1) ... exp(s_{k-1} X_{k-1}) exp(t s_k X_k), piece by piece.
class IsometryPath {
 public:
  /// The constant path at the identity.
  explicit IsometryPath(const QuadraticSpace& space);

  /// Throws std::invalid_argument unless X^T J + J X = 0.
  static IsometryPath one_parameter(const QuadraticSpace& space, const RMatrix& generator,
                                    double parameter);
  static IsometryPath rotation(const QuadraticSpace& space, double theta);
  static IsometryPath boost(const QuadraticSpace& space, double t);

  const QuadraticSpace& space() const { return space_; }
  const std::vector<PathPiece>& pieces() const { return pieces_; }

  RMatrix endpoint() const;
  /// Reversed path transported to the identity; represents the inverse.
  IsometryPath inverse() const;
  /// n-fold concatenation (n >= 0); negative n uses the inverse.
  IsometryPath pow(int n) const;

  /// Matrices g_0 = I, ..., g_M with consecutive operator distance below
  /// max_distance.
  std::vector<RMatrix> steps(double max_distance = 0.1) const;
  /// Largest form residual over steps().
  double max_form_residual() const;

  friend IsometryPath compose_paths(const IsometryPath& p1, const IsometryPath& p2);

 private:
  QuadraticSpace space_;
  std::vector<PathPiece> pieces_;
};

IsometryPath compose_paths(const IsometryPath& p1, const IsometryPath& p2);

/// The loop whose lift shifts Phi by +1: rotation by -2 pi t, t in [0, 1].
IsometryPath central_loop(const QuadraticSpace& space);

struct PhiOptions {
  int max_depth = 30;
  double refine_turns = 0.125;  // bisect while a step moves the argument this much
  double max_turns = 0.25;      // unresolvable jump
};

/// Continuously unwrapped arg j(g_t; v) / 2 pi along the path, from 0.
/// Throws std::domain_error if a step keeps jumping by max_turns at full
/// refinement or j vanishes.
double phi_lift(const IsometryPath& path, const PeriodVector& v, const IsotropicVector& w0,
                const PhiOptions& options = {});

/// Phi(g^n) / n, n >= 1.
double homogenize_phi(const IsometryPath& path, const PeriodVector& v, const IsotropicVector& w0,
                      int n);

/// Product of `factors` exponentials exp(s X) with X a random unit
/// combination of the generators and s uniform in [-2, 2].
IsometryPath random_isometry_path(const QuadraticSpace& space, std::mt19937_64& rng,
                                  int factors = 4);

struct DefectReport {
  int rho = 0;
  int samples = 0;
  double max_defect = 0.0;
  double bound = 0.0;
  double max_cocycle_residual = 0.0;
  double max_form_residual = 0.0;
  double min_abs_j = 0.0;
  bool pass = false;
};

/// max |Phi(g1 g2) - Phi(g1) - Phi(g2)| over `samples` seeded random pairs,
/// with cocycle and form residuals recorded along the way.  pass means the
/// defect is at most rho + 3 + 1e-6 and the residuals are at most 1e-9.
DefectReport defect_experiment(const QuadraticSpace& space, int samples, std::uint64_t seed);

}  // namespace shiftnum::orthog

#endif
