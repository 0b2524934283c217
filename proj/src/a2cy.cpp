#include "shiftnum/a2cy.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace shiftnum::a2cy {

using psl2z::Psl2Matrix;

namespace {

void require_cy_dimension(int n_cy) {
  if (n_cy < 3) throw std::invalid_argument("N must be >= 3, got " + std::to_string(n_cy));
}

// alpha(T2) = [[1,0],[-1,1]] = R^-1.
Psl2Matrix token_matrix(const Token& t) {
  switch (t.kind) {
    case Token::Kind::T1: return Psl2Matrix::L();
    case Token::Kind::T2: return Psl2Matrix::R().inverse();
    case Token::Kind::T1Inv: return Psl2Matrix::L().inverse();
    case Token::Kind::T2Inv: return Psl2Matrix::R();
    case Token::Kind::Shift: return Psl2Matrix::identity();
  }
  return Psl2Matrix::identity();
}

// Lift of an S/U normal form through alpha: S <- T1 T2 T1, U <- T1 T2 T1 T1.
AutWord lift_letters(const std::vector<psl2z::Letter>& letters) {
  static const AutWord s_lift({Token::t1(), Token::t2(), Token::t1()});
  static const AutWord u_lift({Token::t1(), Token::t2(), Token::t1(), Token::t1()});
  AutWord out;
  for (const auto& l : letters) {
    if (l.factor == psl2z::Letter::Factor::S)
      out = out * s_lift;
    else
      out = out * (l.exponent > 0 ? u_lift : u_lift.inverse());
  }
  return out;
}

TorsionTag tag_for(psl2z::TorsionKind kind) {
  switch (kind) {
    case psl2z::TorsionKind::Identity: return TorsionTag::Identity;
    case psl2z::TorsionKind::S: return TorsionTag::T1T2T1;
    case psl2z::TorsionKind::U: return TorsionTag::T2T1Squared;
    case psl2z::TorsionKind::UInverse: return TorsionTag::T2T1;
  }
  return TorsionTag::Identity;
}

AutWord blocks_word(const psl2z::CyclicLRWord& core) {
  std::vector<Token> tokens;
  for (const auto& [a, b] : core.blocks) {
    for (std::int64_t i = 0; i < a; ++i) tokens.push_back(Token::t1());
    for (std::int64_t i = 0; i < b; ++i) tokens.push_back(Token::t2_inv());
  }
  return AutWord(std::move(tokens));
}

}  // namespace

Token Token::inverse() const {
  switch (kind) {
    case Kind::T1: return t1_inv();
    case Kind::T2: return t2_inv();
    case Kind::T1Inv: return t1();
    case Kind::T2Inv: return t2();
    case Kind::Shift: return shift_by(-shift);
  }
  return *this;
}

std::string Token::str() const {
  switch (kind) {
    case Kind::T1: return "T1";
    case Kind::T2: return "T2";
    case Kind::T1Inv: return "T1^-1";
    case Kind::T2Inv: return "T2^-1";
    case Kind::Shift: return "[" + std::to_string(shift) + "]";
  }
  return "?";
}

AutWord AutWord::parse(const std::string& text) {
  std::istringstream in(text);
  std::vector<Token> tokens;
  std::string tok;
  while (in >> tok) {
    if (tok == "T1") {
      tokens.push_back(Token::t1());
    } else if (tok == "T2") {
      tokens.push_back(Token::t2());
    } else if (tok == "T1^-1") {
      tokens.push_back(Token::t1_inv());
    } else if (tok == "T2^-1") {
      tokens.push_back(Token::t2_inv());
    } else if (tok.size() >= 3 && tok.front() == '[' && tok.back() == ']') {
      std::string body = tok.substr(1, tok.size() - 2);
      std::size_t pos = 0;
      std::int64_t k = 0;
      try {
        k = std::stoll(body, &pos, 10);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad shift token: " + tok);
      }
      if (pos != body.size()) throw std::invalid_argument("bad shift token: " + tok);
      tokens.push_back(Token::shift_by(k));
    } else {
      throw std::invalid_argument("unknown token: " + tok);
    }
  }
  return AutWord(std::move(tokens));
}

AutWord AutWord::inverse() const {
  std::vector<Token> out;
  out.reserve(tokens_.size());
  for (auto it = tokens_.rbegin(); it != tokens_.rend(); ++it) out.push_back(it->inverse());
  return AutWord(std::move(out));
}

AutWord AutWord::pow(int n) const {
  AutWord base = n < 0 ? inverse() : *this;
  AutWord out;
  for (int i = 0; i < std::abs(n); ++i) out = out * base;
  return out;
}

AutWord AutWord::shifted(std::int64_t k) const {
  AutWord out = *this;
  out.tokens_.push_back(Token::shift_by(k));
  return out;
}

std::string AutWord::str() const {
  if (tokens_.empty()) return "id";
  std::string out;
  for (const auto& t : tokens_) {
    if (!out.empty()) out += ' ';
    out += t.str();
  }
  return out;
}

AutWord operator*(const AutWord& x, const AutWord& y) {
  std::vector<Token> out = x.tokens_;
  out.insert(out.end(), y.tokens_.begin(), y.tokens_.end());
  return AutWord(std::move(out));
}

std::string to_string(TorsionTag tag) {
  switch (tag) {
    case TorsionTag::Identity: return "id";
    case TorsionTag::T1T2T1: return "T1T2T1";
    case TorsionTag::T2T1: return "T2T1";
    case TorsionTag::T2T1Squared: return "(T2T1)^2";
  }
  return "?";
}

AutWord torsion_word(TorsionTag tag) {
  switch (tag) {
    case TorsionTag::Identity: return {};
    case TorsionTag::T1T2T1: return AutWord({Token::t1(), Token::t2(), Token::t1()});
    case TorsionTag::T2T1: return AutWord({Token::t2(), Token::t1()});
    case TorsionTag::T2T1Squared:
      return AutWord({Token::t2(), Token::t1(), Token::t2(), Token::t1()});
  }
  return {};
}

AutWord AutNormalForm::core_word() const {
  if (const auto* tag = std::get_if<TorsionTag>(&core)) return torsion_word(*tag);
  return blocks_word(std::get<psl2z::CyclicLRWord>(core));
}

AutWord AutNormalForm::word() const {
  return (conjugator * core_word() * conjugator.inverse()).shifted(shift.convert_to<std::int64_t>());
}

Psl2Matrix alpha(const AutWord& word) {
  Psl2Matrix m;
  for (const auto& t : word.tokens()) m = m * token_matrix(t);
  return m;
}

Rational weight_w(const AutWord& word, int n_cy) {
  BigInt twists = 0;
  BigInt shifts = 0;
  for (const auto& t : word.tokens()) {
    switch (t.kind) {
      case Token::Kind::T1:
      case Token::Kind::T2: twists += 1; break;
      case Token::Kind::T1Inv:
      case Token::Kind::T2Inv: twists -= 1; break;
      case Token::Kind::Shift: shifts += t.shift; break;
    }
  }
  return Rational(BigInt(4 - 3 * n_cy) * twists, BigInt(6)) + Rational(shifts);
}

AutNormalForm normalize(const AutWord& word, int n_cy) {
  const Psl2Matrix image = alpha(word);
  const psl2z::CyclicReduction red = psl2z::cyclic_reduce(image);

  AutNormalForm nf;
  nf.conjugator = lift_letters(psl2z::decompose_su(red.conjugator).letters());
  if (const auto* tag = std::get_if<psl2z::FiniteOrderTag>(&red.core))
    nf.core = tag_for(tag->kind);
  else
    nf.core = std::get<psl2z::CyclicLRWord>(red.core);

  if (alpha(nf.conjugator * nf.core_word() * nf.conjugator.inverse()) != image)
    throw std::logic_error("normalize: lifted core does not reproduce alpha(" + word.str() + ")");

  Rational diff = weight_w(word, n_cy) - weight_w(nf.core_word(), n_cy);
  if (!is_integer(diff))
    throw std::logic_error("normalize: non-integral shift " + diff.str() + " for " + word.str());
  nf.shift = boost::multiprecision::numerator(diff);
  return nf;
}

ShiftingPair tau_pm(const AutNormalForm& nf, const AutWord& word, int n_cy) {
  require_cy_dimension(n_cy);
  if (nf.finite_order()) {
    Rational w = weight_w(word, n_cy);
    return {w, w};
  }
  const auto& core = std::get<psl2z::CyclicLRWord>(nf.core);
  const BigInt n1 = n_cy - 1;
  return {Rational(n1 * core.sum_b() + nf.shift), Rational(-n1 * core.sum_a() + nf.shift)};
}

ShiftingPair tau_pm(const AutWord& word, int n_cy) {
  require_cy_dimension(n_cy);
  return tau_pm(normalize(word, n_cy), word, n_cy);
}

Rational tau(const AutWord& word, int n_cy) {
  require_cy_dimension(n_cy);
  Rational via_phi = weight_w(word, n_cy) - Rational(psl2z::phi_homogeneous(alpha(word)), BigInt(6));
  ShiftingPair pm = tau_pm(word, n_cy);
  Rational average = (pm.plus + pm.minus) / 2;
  if (via_phi != average)
    throw std::logic_error("tau: w - phi/6 = " + via_phi.str() + " but (tau+ + tau-)/2 = " +
                           average.str() + " for " + word.str());
  return via_phi;
}

FactorList twist_apply(TwistGen gen, const FactorList& fl, int n_cy) {
  FactorList out;
  out.reserve(fl.size() * 2);
  for (const auto& f : fl) {
    if (gen == TwistGen::T1) {
      if (f.object == 1) {
        out.push_back({1, f.multiplicity, f.shift + 1 - n_cy});
      } else {
        out.push_back({2, f.multiplicity, f.shift});
        out.push_back({1, f.multiplicity, f.shift});
      }
    } else {
      if (f.object == 2) {
        out.push_back({2, f.multiplicity, f.shift + n_cy - 1});
      } else {
        out.push_back({2, f.multiplicity, f.shift});
        out.push_back({1, f.multiplicity, f.shift});
      }
    }
  }
  return out;
}

namespace {

void validate_factors(const FactorList& fl) {
  for (const auto& f : fl) {
    if (f.object != 1 && f.object != 2) throw std::invalid_argument("object index must be 1 or 2");
    if (f.multiplicity < 1) throw std::invalid_argument("multiplicity must be >= 1");
  }
}

enum class Rule { Merge, Swap };

void apply_rule(FactorList& fl, std::size_t i, Rule rule) {
  if (rule == Rule::Merge) {
    fl[i].multiplicity += fl[i + 1].multiplicity;
    fl.erase(fl.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  } else {
    std::swap(fl[i], fl[i + 1]);
  }
}

}  // namespace

FactorList hn_normalize(const FactorList& fl, int n_cy) {
  require_cy_dimension(n_cy);
  validate_factors(fl);
  FactorList out = fl;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < out.size();) {
      auto p = out[i].phase();
      auto q = out[i + 1].phase();
      if (p == q) {
        apply_rule(out, i, Rule::Merge);
        changed = true;
      } else if (p < q) {
        apply_rule(out, i, Rule::Swap);
        changed = true;
        if (i > 0) --i;
      } else {
        ++i;
      }
    }
  }
  return out;
}

FactorList hn_normalize_random_order(const FactorList& fl, int n_cy, std::mt19937_64& rng) {
  require_cy_dimension(n_cy);
  validate_factors(fl);
  FactorList out = fl;
  std::vector<std::pair<std::size_t, Rule>> moves;
  for (;;) {
    moves.clear();
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
      auto p = out[i].phase();
      auto q = out[i + 1].phase();
      if (p == q)
        moves.emplace_back(i, Rule::Merge);
      else if (p < q)
        moves.emplace_back(i, Rule::Swap);
    }
    if (moves.empty()) return out;
    std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
    auto [i, rule] = moves[pick(rng)];
    apply_rule(out, i, rule);
  }
}

ShiftingPair oracle_tau_pm(const AutWord& word, int n_cy, int iters) {
  require_cy_dimension(n_cy);
  if (iters < 1) throw std::invalid_argument("iters must be >= 1");
  if (word.empty()) throw std::invalid_argument("oracle needs a nonempty word");
  std::vector<TwistGen> gens;
  for (const auto& t : word.tokens()) {
    if (t.kind == Token::Kind::T1)
      gens.push_back(TwistGen::T1);
    else if (t.kind == Token::Kind::T2Inv)
      gens.push_back(TwistGen::T2Inv);
    else
      throw std::invalid_argument("oracle accepts only T1 and T2^-1 tokens, got " + t.str());
  }

  FactorList g = hn_normalize({{1, 1, 0}, {2, 1, 0}}, n_cy);
  const SymbolicPhase top0 = g.front().phase();
  const SymbolicPhase bottom0 = g.back().phase();

  std::int64_t step_plus = 0, step_minus = 0;
  for (int n = 1; n <= iters; ++n) {
    for (auto it = gens.rbegin(); it != gens.rend(); ++it)
      g = hn_normalize(twist_apply(*it, g, n_cy), n_cy);
    const SymbolicPhase top = g.front().phase();
    const SymbolicPhase bottom = g.back().phase();
    if (top.object != top0.object || bottom.object != bottom0.object)
      throw std::logic_error("oracle: extreme factor changed object at iteration " +
                             std::to_string(n) + " for " + word.str());
    const std::int64_t grow_plus = top.offset - top0.offset;
    const std::int64_t grow_minus = bottom.offset - bottom0.offset;
    if (n == 1) {
      step_plus = grow_plus;
      step_minus = grow_minus;
    } else if (grow_plus != n * step_plus || grow_minus != n * step_minus) {
      throw std::logic_error("oracle: phase growth not linear at iteration " + std::to_string(n) +
                             " for " + word.str());
    }
  }
  return {Rational(step_plus), Rational(step_minus)};
}

AutWord random_word(std::mt19937_64& rng, int max_length, bool include_shifts) {
  std::uniform_int_distribution<int> len_dist(1, std::max(1, max_length));
  std::uniform_int_distribution<int> tok_dist(0, include_shifts ? 5 : 3);
  std::vector<Token> tokens;
  for (int i = len_dist(rng); i > 0; --i) {
    switch (tok_dist(rng)) {
      case 0: tokens.push_back(Token::t1()); break;
      case 1: tokens.push_back(Token::t2()); break;
      case 2: tokens.push_back(Token::t1_inv()); break;
      case 3: tokens.push_back(Token::t2_inv()); break;
      case 4: tokens.push_back(Token::shift_by(1)); break;
      default: tokens.push_back(Token::shift_by(-1)); break;
    }
  }
  return AutWord(std::move(tokens));
}

AutWord random_positive_word(std::mt19937_64& rng, int max_total_exponent) {
  std::uniform_int_distribution<int> len_dist(1, std::max(1, max_total_exponent));
  std::bernoulli_distribution coin(0.5);
  std::vector<Token> tokens;
  for (int i = len_dist(rng); i > 0; --i)
    tokens.push_back(coin(rng) ? Token::t1() : Token::t2_inv());
  return AutWord(std::move(tokens));
}

}  // namespace shiftnum::a2cy
