#ifndef SHIFTNUM_A2CY_HPP
#define SHIFTNUM_A2CY_HPP

// The autoequivalence group Aut*(D_N) of the N-Calabi-Yau A2 category,
// generated by the spherical twists T1, T2 and the shift [1] subject to
//   T1 T2 T1 = T2 T1 T2,  (T1 T2)^3 = [4 - 3N],  T_i [1] = [1] T_i.
// Shifting numbers are computed two ways: in closed form from a canonical
// normal form, and by iterating symbolic Harder-Narasimhan factor lists.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "shiftnum/numeric.hpp"
#include "shiftnum/psl2z.hpp"

namespace shiftnum::a2cy {

struct Token {
  enum class Kind : std::uint8_t { T1, T2, T1Inv, T2Inv, Shift };
  Kind kind = Kind::Shift;
  std::int64_t shift = 0;  // only for Kind::Shift

  static Token t1() { return {Kind::T1, 0}; }
  static Token t2() { return {Kind::T2, 0}; }
  static Token t1_inv() { return {Kind::T1Inv, 0}; }
  static Token t2_inv() { return {Kind::T2Inv, 0}; }
  static Token shift_by(std::int64_t k) { return {Kind::Shift, k}; }

  Token inverse() const;
  std::string str() const;

  friend bool operator==(const Token&, const Token&) = default;
};

/// A word in T1^{+-1}, T2^{+-1}, [k].  Composition reads left to right as
/// functor composition, so the rightmost token acts first on objects.
class AutWord {
 public:
  AutWord() = default;
  explicit AutWord(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  /// Whitespace-separated `T1`, `T2`, `T1^-1`, `T2^-1`, `[k]`.
  static AutWord parse(const std::string& text);

  const std::vector<Token>& tokens() const { return tokens_; }
  bool empty() const { return tokens_.empty(); }

  AutWord inverse() const;
  AutWord pow(int n) const;
  AutWord shifted(std::int64_t k) const;  // this * [k]
  std::string str() const;                // "id" for the empty word

  friend AutWord operator*(const AutWord& x, const AutWord& y);
  friend bool operator==(const AutWord&, const AutWord&) = default;

 private:
  std::vector<Token> tokens_;
};

/// Finite-order cores: representatives of the four conjugacy classes of
/// torsion in PSL(2,Z).
enum class TorsionTag : std::uint8_t { Identity, T1T2T1, T2T1, T2T1Squared };

std::string to_string(TorsionTag tag);
AutWord torsion_word(TorsionTag tag);

/// F = conjugator * core * conjugator^-1 * [shift].  An infinite-order core
/// L^{a1} R^{b1} ... is read as T1^{a1} T2^{-b1} ...
struct AutNormalForm {
  AutWord conjugator;
  std::variant<TorsionTag, psl2z::CyclicLRWord> core;
  BigInt shift = 0;

  AutWord core_word() const;
  AutWord word() const;  // the full representative word
  bool finite_order() const { return std::holds_alternative<TorsionTag>(core); }
};

psl2z::Psl2Matrix alpha(const AutWord& word);
Rational weight_w(const AutWord& word, int n_cy);
AutNormalForm normalize(const AutWord& word, int n_cy);

struct ShiftingPair {
  Rational plus;
  Rational minus;
  friend bool operator==(const ShiftingPair&, const ShiftingPair&) = default;
};

/// Upper and lower shifting numbers in closed form.  Requires N >= 3.
ShiftingPair tau_pm(const AutWord& word, int n_cy);
ShiftingPair tau_pm(const AutNormalForm& nf, const AutWord& word, int n_cy);

/// w - phi(alpha)/6, checked against the average of tau_pm.
Rational tau(const AutWord& word, int n_cy);

// Symbolic Harder-Narasimhan data ------------------------------------------

/// phi(S_i) + offset, under 0 < phi(S1) < phi(S2) < 1.
struct SymbolicPhase {
  int object = 1;
  std::int64_t offset = 0;

  friend bool operator==(const SymbolicPhase&, const SymbolicPhase&) = default;
  friend auto operator<=>(const SymbolicPhase& x, const SymbolicPhase& y) {
    if (x.offset != y.offset) return x.offset <=> y.offset;
    return x.object <=> y.object;
  }
};

struct Factor {
  int object = 1;              // 1 or 2
  std::int64_t multiplicity = 1;
  std::int64_t shift = 0;

  SymbolicPhase phase() const { return {object, shift}; }
  friend bool operator==(const Factor&, const Factor&) = default;
};

using FactorList = std::vector<Factor>;

enum class TwistGen : std::uint8_t { T1, T2Inv };

FactorList twist_apply(TwistGen gen, const FactorList& fl, int n_cy);

/// Merge equal neighbours and swap increasing neighbours until phases
/// strictly decrease.  Requires N >= 3.
FactorList hn_normalize(const FactorList& fl, int n_cy);

/// Same rewriting system, but each step applies a uniformly chosen
/// applicable rule.  Used to check confluence.
FactorList hn_normalize_random_order(const FactorList& fl, int n_cy, std::mt19937_64& rng);

/// Per-iteration growth of the extreme phases of F^n(S1 + S2), n = 1..iters.
/// Word must be a nonempty product of T1 and T2^-1 only.
ShiftingPair oracle_tau_pm(const AutWord& word, int n_cy, int iters);

// Sampling helpers.
AutWord random_word(std::mt19937_64& rng, int max_length, bool include_shifts = true);
AutWord random_positive_word(std::mt19937_64& rng, int max_total_exponent);

}  // namespace shiftnum::a2cy

#endif
