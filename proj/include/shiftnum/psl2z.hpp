#ifndef SHIFTNUM_PSL2Z_HPP
#define SHIFTNUM_PSL2Z_HPP

// Exact arithmetic in PSL(2,Z) = Z/2 * Z/3, the S/U normal form, the
// Rademacher function phi0 and its homogenization phi.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "shiftnum/numeric.hpp"

namespace shiftnum::psl2z {

/// Integer 2x2 matrix of determinant one, stored with the first nonzero
/// entry (reading order) positive so that equality up to sign is plain
/// equality.
class Psl2Matrix {
 public:
  Psl2Matrix();  // identity
  /// Throws std::invalid_argument unless ad - bc == 1.
  Psl2Matrix(BigInt a, BigInt b, BigInt c, BigInt d);

  static Psl2Matrix identity() { return {}; }
  static Psl2Matrix S();  // [[0,-1],[1,0]]
  static Psl2Matrix U();  // [[0,-1],[1,1]]
  static Psl2Matrix L();  // SU  = [[1,1],[0,1]]
  static Psl2Matrix R();  // SU^-1 = [[1,0],[1,1]]

  const BigInt& a() const { return a_; }
  const BigInt& b() const { return b_; }
  const BigInt& c() const { return c_; }
  const BigInt& d() const { return d_; }

  Psl2Matrix inverse() const;
  Psl2Matrix pow(std::int64_t n) const;
  bool is_identity() const;

  friend Psl2Matrix operator*(const Psl2Matrix& x, const Psl2Matrix& y);
  friend bool operator==(const Psl2Matrix& x, const Psl2Matrix& y) = default;

  std::string str() const;  // "a,b,c,d"

 private:
  struct Unchecked {};
  Psl2Matrix(BigInt a, BigInt b, BigInt c, BigInt d, Unchecked);
  void normalize_sign();

  BigInt a_, b_, c_, d_;
};

/// One letter of the free product: S, or U^{+1} / U^{-1}.
struct Letter {
  enum class Factor : std::uint8_t { S, U };
  Factor factor = Factor::S;
  int exponent = 1;  // 1 for S; +1 or -1 for U

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// S^{d1} U^{e1} S U^{e2} S ... S U^{em} S^{d2}.  With no U letters the
/// word is either empty or the bare letter S (leading_s set).
struct FreeProductWord {
  bool leading_s = false;
  std::vector<int> epsilons;
  bool trailing_s = false;

  std::vector<Letter> letters() const;
  static FreeProductWord from_letters(const std::vector<Letter>& letters);
  std::string str() const;  // "S U S U^-1", "1" for the empty word

  friend bool operator==(const FreeProductWord&, const FreeProductWord&) = default;
};

/// Positive word L^{a1} R^{b1} ... L^{ak} R^{bk}, up to cyclic rotation.
/// The stored rotation is the lexicographically least one.
struct CyclicLRWord {
  std::vector<std::pair<std::int64_t, std::int64_t>> blocks;

  Psl2Matrix matrix() const;
  std::int64_t sum_a() const;
  std::int64_t sum_b() const;

  friend bool operator==(const CyclicLRWord&, const CyclicLRWord&) = default;
};

enum class TorsionKind : std::uint8_t { Identity, S, U, UInverse };

struct FiniteOrderTag {
  TorsionKind kind = TorsionKind::Identity;
  int order() const;
  Psl2Matrix representative() const;

  friend bool operator==(const FiniteOrderTag&, const FiniteOrderTag&) = default;
};

using ReducedCore = std::variant<FiniteOrderTag, CyclicLRWord>;

/// m = conjugator * core * conjugator^-1 (up to sign).
struct CyclicReduction {
  Psl2Matrix conjugator;
  ReducedCore core;

  Psl2Matrix core_matrix() const;
  bool finite_order() const { return std::holds_alternative<FiniteOrderTag>(core); }
};

Psl2Matrix evaluate_letters(const std::vector<Letter>& letters);
Psl2Matrix evaluate_word(const FreeProductWord& w);
FreeProductWord decompose_su(const Psl2Matrix& m);

BigInt rademacher_phi0(const Psl2Matrix& m);
CyclicReduction cyclic_reduce(const Psl2Matrix& m);
BigInt phi_homogeneous(const Psl2Matrix& m);

/// phi0(m^n)/n by direct matrix power.  Requires n >= 1.
Rational phi_oracle(const Psl2Matrix& m, std::int64_t n);

/// Largest |phi0(AB) - phi0(A) - phi0(B)| over `count` pairs drawn from
/// `sampler`.
double defect_sample(const std::function<Psl2Matrix()>& sampler, int count);

/// Product of between 1 and max_length generators drawn uniformly from
/// {S, U, U^-1, L, L^-1, R, R^-1}.
Psl2Matrix random_product(std::mt19937_64& rng, int max_length);

}  // namespace shiftnum::psl2z

#endif
