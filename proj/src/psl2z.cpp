#include "shiftnum/psl2z.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace shiftnum {

Rational parse_rational(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  auto last = text.find_last_not_of(" \t\r\n");
  if (first == std::string::npos) throw std::invalid_argument("empty rational");
  const std::string s = text.substr(first, last - first + 1);

  auto parse_int = [&](const std::string& digits) -> BigInt {
    std::size_t i = 0;
    bool neg = false;
    if (i < digits.size() && (digits[i] == '+' || digits[i] == '-')) {
      neg = digits[i] == '-';
      ++i;
    }
    if (i == digits.size()) throw std::invalid_argument("malformed rational: " + s);
    BigInt v = 0;
    for (; i < digits.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(digits[i])))
        throw std::invalid_argument("malformed rational: " + s);
      v = v * 10 + (digits[i] - '0');
    }
    return neg ? BigInt(-v) : v;
  };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    BigInt num = parse_int(s.substr(0, slash));
    BigInt den = parse_int(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    return Rational(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    if (frac.empty()) frac = "0";
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt w = parse_int(whole);
    BigInt f = parse_int(frac);
    if (f < 0 || frac[0] == '-' || frac[0] == '+')
      throw std::invalid_argument("malformed rational: " + s);
    BigInt mag = (w < 0 ? BigInt(-w) : w) * scale + f;
    return Rational(neg ? BigInt(-mag) : mag, scale);
  }
  return Rational(parse_int(s));
}

}  // namespace shiftnum

namespace shiftnum::psl2z {

namespace {

constexpr std::size_t kMaxLetters = 50'000'000;

std::int64_t to_i64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    throw std::length_error("normal form too long to materialize");
  return static_cast<std::int64_t>(v);
}

// Free reduction in Z/2 * Z/3.  U exponents are kept mod 3 in {1, 2}.
class LetterStack {
 public:
  void push_s() {
    if (!stack_.empty() && stack_.back().factor == Letter::Factor::S) {
      stack_.pop_back();
      return;
    }
    stack_.push_back({Letter::Factor::S, 1});
  }
  void push_u(int power) {
    power = ((power % 3) + 3) % 3;
    if (power == 0) return;
    if (!stack_.empty() && stack_.back().factor == Letter::Factor::U) {
      int merged = (stack_.back().exponent + power) % 3;
      if (merged == 0)
        stack_.pop_back();
      else
        stack_.back().exponent = merged;
      return;
    }
    if (stack_.size() >= kMaxLetters) throw std::length_error("normal form too long");
    stack_.push_back({Letter::Factor::U, power});
  }
  void push_l_power(std::int64_t q) {
    // L = S U, L^-1 = U^-1 S.
    if (q > 0) {
      for (std::int64_t i = 0; i < q; ++i) {
        push_s();
        push_u(1);
      }
    } else {
      for (std::int64_t i = 0; i < -q; ++i) {
        push_u(2);
        push_s();
      }
    }
  }
  std::vector<Letter> letters() const {
    std::vector<Letter> out = stack_;
    for (auto& l : out)
      if (l.factor == Letter::Factor::U) l.exponent = l.exponent == 1 ? 1 : -1;
    return out;
  }

 private:
  std::vector<Letter> stack_;
};

Psl2Matrix letter_matrix(const Letter& l) {
  if (l.factor == Letter::Factor::S) return Psl2Matrix::S();
  return l.exponent > 0 ? Psl2Matrix::U() : Psl2Matrix::U().inverse();
}

Psl2Matrix u_power(int e) {
  e = ((e % 3) + 3) % 3;
  if (e == 0) return Psl2Matrix::identity();
  return e == 1 ? Psl2Matrix::U() : Psl2Matrix::U().inverse();
}

}  // namespace

Psl2Matrix::Psl2Matrix() : a_(1), b_(0), c_(0), d_(1) {}

Psl2Matrix::Psl2Matrix(BigInt a, BigInt b, BigInt c, BigInt d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  if (a_ * d_ - b_ * c_ != 1)
    throw std::invalid_argument("determinant must be 1: " + str());
  normalize_sign();
}

Psl2Matrix::Psl2Matrix(BigInt a, BigInt b, BigInt c, BigInt d, Unchecked)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  normalize_sign();
}

void Psl2Matrix::normalize_sign() {
  const BigInt* lead = a_ != 0 ? &a_ : (b_ != 0 ? &b_ : &c_);
  if (*lead < 0) {
    a_ = -a_;
    b_ = -b_;
    c_ = -c_;
    d_ = -d_;
  }
}

Psl2Matrix Psl2Matrix::S() { return {0, -1, 1, 0}; }
Psl2Matrix Psl2Matrix::U() { return {0, -1, 1, 1}; }
Psl2Matrix Psl2Matrix::L() { return {1, 1, 0, 1}; }
Psl2Matrix Psl2Matrix::R() { return {1, 0, 1, 1}; }

Psl2Matrix Psl2Matrix::inverse() const { return {d_, -b_, -c_, a_, Unchecked{}}; }

Psl2Matrix Psl2Matrix::pow(std::int64_t n) const {
  Psl2Matrix base = n < 0 ? inverse() : *this;
  std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  Psl2Matrix acc;
  while (e > 0) {
    if (e & 1U) acc = acc * base;
    base = base * base;
    e >>= 1U;
  }
  return acc;
}

bool Psl2Matrix::is_identity() const { return a_ == 1 && b_ == 0 && c_ == 0 && d_ == 1; }

Psl2Matrix operator*(const Psl2Matrix& x, const Psl2Matrix& y) {
  return {x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_,
          x.c_ * y.a_ + x.d_ * y.c_, x.c_ * y.b_ + x.d_ * y.d_, Psl2Matrix::Unchecked{}};
}

std::string Psl2Matrix::str() const {
  std::ostringstream os;
  os << a_ << ',' << b_ << ',' << c_ << ',' << d_;
  return os.str();
}

std::vector<Letter> FreeProductWord::letters() const {
  std::vector<Letter> out;
  if (leading_s) out.push_back({Letter::Factor::S, 1});
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (i > 0) out.push_back({Letter::Factor::S, 1});
    out.push_back({Letter::Factor::U, epsilons[i]});
  }
  if (trailing_s) out.push_back({Letter::Factor::S, 1});
  return out;
}

FreeProductWord FreeProductWord::from_letters(const std::vector<Letter>& letters) {
  FreeProductWord w;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const Letter& l = letters[i];
    if (i > 0 && letters[i - 1].factor == l.factor)
      throw std::invalid_argument("letters must alternate between factors");
    if (l.factor == Letter::Factor::U) {
      if (l.exponent != 1 && l.exponent != -1)
        throw std::invalid_argument("U exponent must be +1 or -1");
      w.epsilons.push_back(l.exponent);
    }
  }
  if (!letters.empty()) {
    w.leading_s = letters.front().factor == Letter::Factor::S;
    w.trailing_s = letters.back().factor == Letter::Factor::S && !w.epsilons.empty();
  }
  return w;
}

std::string FreeProductWord::str() const {
  auto ls = letters();
  if (ls.empty()) return "1";
  std::string out;
  for (const auto& l : ls) {
    if (!out.empty()) out += ' ';
    if (l.factor == Letter::Factor::S)
      out += 'S';
    else
      out += l.exponent > 0 ? "U" : "U^-1";
  }
  return out;
}

Psl2Matrix evaluate_letters(const std::vector<Letter>& letters) {
  Psl2Matrix m;
  for (const auto& l : letters) m = m * letter_matrix(l);
  return m;
}

Psl2Matrix evaluate_word(const FreeProductWord& w) { return evaluate_letters(w.letters()); }

FreeProductWord decompose_su(const Psl2Matrix& m) {
  // Column reduction: peel A = L^q S A' until the lower-left entry vanishes,
  // then free-reduce the resulting S/U string.
  LetterStack stack;
  BigInt a = m.a(), b = m.b(), c = m.c(), d = m.d();
  while (c != 0) {
    BigInt q = a / c;  // truncating, |a - q c| < |c|
    stack.push_l_power(to_i64(q));
    BigInt r = a - q * c;
    BigInt bp = b - q * d;
    stack.push_s();
    // S^-1 [[r, bp], [c, d]] = [[c, d], [-r, -bp]]
    a = c;
    b = d;
    c = -r;
    d = -bp;
  }
  // Remaining matrix is +-[[1, b a], [0, 1]].
  stack.push_l_power(to_i64(a * b));
  return FreeProductWord::from_letters(stack.letters());
}

BigInt rademacher_phi0(const Psl2Matrix& m) {
  BigInt sum = 0;
  for (int e : decompose_su(m).epsilons) sum += e;
  return sum;
}

int FiniteOrderTag::order() const {
  switch (kind) {
    case TorsionKind::Identity: return 1;
    case TorsionKind::S: return 2;
    case TorsionKind::U:
    case TorsionKind::UInverse: return 3;
  }
  return 1;
}

Psl2Matrix FiniteOrderTag::representative() const {
  switch (kind) {
    case TorsionKind::Identity: return Psl2Matrix::identity();
    case TorsionKind::S: return Psl2Matrix::S();
    case TorsionKind::U: return Psl2Matrix::U();
    case TorsionKind::UInverse: return Psl2Matrix::U().inverse();
  }
  return Psl2Matrix::identity();
}

Psl2Matrix CyclicLRWord::matrix() const {
  Psl2Matrix m;
  for (const auto& [a, b] : blocks) m = m * Psl2Matrix::L().pow(a) * Psl2Matrix::R().pow(b);
  return m;
}

std::int64_t CyclicLRWord::sum_a() const {
  std::int64_t s = 0;
  for (const auto& blk : blocks) s += blk.first;
  return s;
}

std::int64_t CyclicLRWord::sum_b() const {
  std::int64_t s = 0;
  for (const auto& blk : blocks) s += blk.second;
  return s;
}

Psl2Matrix CyclicReduction::core_matrix() const {
  if (const auto* tag = std::get_if<FiniteOrderTag>(&core)) return tag->representative();
  return std::get<CyclicLRWord>(core).matrix();
}

CyclicReduction cyclic_reduce(const Psl2Matrix& m) {
  std::vector<Letter> nf = decompose_su(m).letters();
  std::deque<Letter> w(nf.begin(), nf.end());
  Psl2Matrix conj;

  // Conjugate away matching end letters until the word is cyclically reduced.
  while (w.size() >= 3 && w.front().factor == w.back().factor) {
    if (w.front().factor == Letter::Factor::S) {
      conj = conj * Psl2Matrix::S();
      w.pop_front();
      w.pop_back();
      continue;
    }
    int front = w.front().exponent;
    int back = w.back().exponent;
    conj = conj * u_power(-back);
    w.pop_back();
    int merged = ((front + back) % 3 + 3) % 3;
    if (merged == 0)
      w.pop_front();
    else
      w.front().exponent = merged == 1 ? 1 : -1;
  }

  CyclicReduction out{conj, FiniteOrderTag{}};
  if (w.empty()) return out;
  if (w.size() == 1) {
    const Letter& l = w.front();
    TorsionKind kind = l.factor == Letter::Factor::S
                           ? TorsionKind::S
                           : (l.exponent > 0 ? TorsionKind::U : TorsionKind::UInverse);
    out.core = FiniteOrderTag{kind};
    return out;
  }

  // Even length, alternating: rotate so the word starts with S.
  if (w.front().factor == Letter::Factor::U) {
    Letter l = w.front();
    conj = conj * u_power(l.exponent);
    w.pop_front();
    w.push_back(l);
  }
  // S U^{e1} S U^{e2} ... = product of L (e=+1) and R (e=-1).
  std::vector<bool> is_l;
  for (std::size_t i = 1; i < w.size(); i += 2) is_l.push_back(w[i].exponent > 0);
  const std::size_t m_len = is_l.size();

  auto lr_matrix = [](bool l) { return l ? Psl2Matrix::L() : Psl2Matrix::R(); };
  CyclicLRWord core;
  bool all_l = std::all_of(is_l.begin(), is_l.end(), [](bool x) { return x; });
  bool all_r = std::none_of(is_l.begin(), is_l.end(), [](bool x) { return x; });
  if (all_l || all_r) {
    auto len = static_cast<std::int64_t>(m_len);
    core.blocks.push_back(all_l ? std::make_pair(len, std::int64_t{0})
                                : std::make_pair(std::int64_t{0}, len));
  } else {
    // Start at an L preceded cyclically by an R.
    std::size_t start = 0;
    while (!(is_l[start] && !is_l[(start + m_len - 1) % m_len])) ++start;
    for (std::size_t i = 0; i < start; ++i) conj = conj * lr_matrix(is_l[i]);
    std::rotate(is_l.begin(), is_l.begin() + static_cast<std::ptrdiff_t>(start), is_l.end());

    std::size_t i = 0;
    while (i < m_len) {
      std::int64_t a = 0, b = 0;
      while (i < m_len && is_l[i]) ++a, ++i;
      while (i < m_len && !is_l[i]) ++b, ++i;
      core.blocks.emplace_back(a, b);
    }
    // Lexicographically least rotation of the block sequence.
    auto blocks = core.blocks;
    std::size_t best = 0;
    auto rotated = [&](std::size_t r) {
      auto v = blocks;
      std::rotate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r), v.end());
      return v;
    };
    auto best_seq = blocks;
    for (std::size_t r = 1; r < blocks.size(); ++r) {
      auto cand = rotated(r);
      if (cand < best_seq) {
        best_seq = std::move(cand);
        best = r;
      }
    }
    for (std::size_t r = 0; r < best; ++r)
      conj = conj * Psl2Matrix::L().pow(blocks[r].first) * Psl2Matrix::R().pow(blocks[r].second);
    core.blocks = std::move(best_seq);
  }
  out.conjugator = conj;
  out.core = std::move(core);

  if (out.conjugator * out.core_matrix() * out.conjugator.inverse() != m)
    throw std::logic_error("cyclic_reduce: conjugation identity failed for " + m.str());
  return out;
}

BigInt phi_homogeneous(const Psl2Matrix& m) {
  auto red = cyclic_reduce(m);
  if (red.finite_order()) return 0;
  const auto& core = std::get<CyclicLRWord>(red.core);
  return BigInt(core.sum_a()) - BigInt(core.sum_b());
}

Rational phi_oracle(const Psl2Matrix& m, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("phi_oracle requires n >= 1");
  return Rational(rademacher_phi0(m.pow(n)), BigInt(n));
}

double defect_sample(const std::function<Psl2Matrix()>& sampler, int count) {
  if (count < 1) throw std::invalid_argument("defect_sample requires count >= 1");
  BigInt worst = 0;
  for (int i = 0; i < count; ++i) {
    Psl2Matrix x = sampler();
    Psl2Matrix y = sampler();
    BigInt dev = rademacher_phi0(x * y) - rademacher_phi0(x) - rademacher_phi0(y);
    if (dev < 0) dev = -dev;
    worst = std::max(worst, dev);
  }
  return worst.convert_to<double>();
}

Psl2Matrix random_product(std::mt19937_64& rng, int max_length) {
  if (max_length < 1) throw std::invalid_argument("max_length must be >= 1");
  static const Psl2Matrix gens[] = {
      Psl2Matrix::S(),           Psl2Matrix::U(), Psl2Matrix::U().inverse(),
      Psl2Matrix::L(),           Psl2Matrix::L().inverse(),
      Psl2Matrix::R(),           Psl2Matrix::R().inverse(),
  };
  std::uniform_int_distribution<int> len_dist(1, max_length);
  std::uniform_int_distribution<int> gen_dist(0, 6);
  Psl2Matrix m;
  for (int i = len_dist(rng); i > 0; --i) m = m * gens[gen_dist(rng)];
  return m;
}

}  // namespace shiftnum::psl2z
