#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "shiftnum/psl2z.hpp"

using namespace shiftnum;
using namespace shiftnum::psl2z;

namespace {

Psl2Matrix from_m2(const oracle::M2& m) { return {m.a, m.b, m.c, m.d}; }

Psl2Matrix lr_word(const std::vector<std::pair<int, int>>& blocks) {
  Psl2Matrix m;
  for (auto [a, b] : blocks) m = m * Psl2Matrix::L().pow(a) * Psl2Matrix::R().pow(b);
  return m;
}

}  // namespace

TEST_CASE("matrix basics") {
  CHECK(Psl2Matrix::S() * Psl2Matrix::S() == Psl2Matrix::identity());
  CHECK(Psl2Matrix::U().pow(3) == Psl2Matrix::identity());
  CHECK(Psl2Matrix::S() * Psl2Matrix::U() == Psl2Matrix(1, 1, 0, 1));
  CHECK(Psl2Matrix::S() * Psl2Matrix::U().inverse() == Psl2Matrix(1, 0, 1, 1));
  CHECK(Psl2Matrix(-1, 0, 0, -1) == Psl2Matrix::identity());
  CHECK(Psl2Matrix(0, 1, -1, 0) == Psl2Matrix::S());
  CHECK_THROWS_AS(Psl2Matrix(2, 0, 0, 1), std::invalid_argument);
  CHECK(Psl2Matrix::L().pow(-3) == Psl2Matrix(1, -3, 0, 1));
  CHECK(Psl2Matrix(2, 1, 1, 1).str() == "2,1,1,1");
}

TEST_CASE("decompose_su examples") {
  CHECK(decompose_su(Psl2Matrix::identity()).str() == "1");
  CHECK(decompose_su(Psl2Matrix(1, 1, 0, 1)).str() == "S U");
  CHECK(decompose_su(Psl2Matrix(2, 1, 1, 1)).str() == "S U S U^-1");
  CHECK(decompose_su(Psl2Matrix::S()).str() == "S");
  CHECK(decompose_su(Psl2Matrix::U()).str() == "U");
  CHECK(decompose_su(Psl2Matrix::U().inverse()).str() == "U^-1");
}

TEST_CASE("evaluate_word examples") {
  CHECK(evaluate_word(FreeProductWord{}) == Psl2Matrix::identity());
  CHECK(evaluate_word(FreeProductWord{true, {1}, false}) == Psl2Matrix(1, 1, 0, 1));
  CHECK(evaluate_word(FreeProductWord{true, {-1}, false}) == Psl2Matrix(1, 0, 1, 1));
}

TEST_CASE("normal forms agree with brute-force enumeration") {
  const auto table = oracle::enumerate_normal_forms(9);
  CHECK(table.size() > 4000);
  for (const auto& [m, form] : table) {
    const Psl2Matrix pm = from_m2(m);
    REQUIRE_MESSAGE(decompose_su(pm).str() == form.text, pm.str());
    REQUIRE(rademacher_phi0(pm) == form.phi0);
  }
}

TEST_CASE("rademacher_phi0 examples") {
  CHECK(rademacher_phi0(Psl2Matrix::S()) == 0);
  CHECK(rademacher_phi0(Psl2Matrix(1, 1, 0, 1)) == 1);
  CHECK(rademacher_phi0(Psl2Matrix(2, 1, 1, 1)) == 0);
}

TEST_CASE("cyclic_reduce examples") {
  auto u = cyclic_reduce(Psl2Matrix::U());
  REQUIRE(u.finite_order());
  CHECK(std::get<FiniteOrderTag>(u.core).order() == 3);
  CHECK(u.conjugator == Psl2Matrix::identity());

  auto l = cyclic_reduce(Psl2Matrix(1, 1, 0, 1));
  REQUIRE(!l.finite_order());
  CHECK(std::get<CyclicLRWord>(l.core).blocks == std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 0}});

  auto lr = cyclic_reduce(Psl2Matrix(2, 1, 1, 1));
  REQUIRE(!lr.finite_order());
  CHECK(std::get<CyclicLRWord>(lr.core).blocks == std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 1}});

  CHECK(cyclic_reduce(Psl2Matrix::identity()).finite_order());
  CHECK(std::get<FiniteOrderTag>(cyclic_reduce(Psl2Matrix::S()).core).order() == 2);
}

TEST_CASE("cyclic_reduce conjugation identity and canonical rotation") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const Psl2Matrix a = random_product(rng, 30);
    const auto r = cyclic_reduce(a);
    CHECK(r.conjugator * r.core_matrix() * r.conjugator.inverse() == a);
    if (!r.finite_order()) {
      const auto& w = std::get<CyclicLRWord>(r.core);
      CHECK(w.matrix() == r.core_matrix());
      // Any rotation of the blocks reduces to the same canonical word.
      const Psl2Matrix b = random_product(rng, 10);
      const auto again = cyclic_reduce(b * a * b.inverse());
      REQUIRE(!again.finite_order());
      CHECK(std::get<CyclicLRWord>(again.core) == w);
      // Idempotence on the core itself.
      CHECK(std::get<CyclicLRWord>(cyclic_reduce(w.matrix()).core) == w);
    }
  }
}

TEST_CASE("lexicographically least rotation") {
  const auto r = cyclic_reduce(lr_word({{2, 1}, {1, 3}}));
  CHECK(std::get<CyclicLRWord>(r.core).blocks ==
        std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 3}, {2, 1}});
}

TEST_CASE("phi_homogeneous examples") {
  CHECK(phi_homogeneous(Psl2Matrix::S()) == 0);
  CHECK(phi_homogeneous(Psl2Matrix(1, 2, 0, 1)) == 2);
  CHECK(phi_homogeneous(Psl2Matrix(2, 1, 1, 1)) == 0);
  CHECK(phi_homogeneous(lr_word({{3, 1}, {2, 2}})) == 2);
}

TEST_CASE("phi_oracle examples") {
  CHECK(phi_oracle(Psl2Matrix::L(), 5) == 1);
  CHECK(phi_oracle(Psl2Matrix::S(), 4) == 0);
  CHECK(phi_oracle(Psl2Matrix(2, 1, 1, 1), 6) == 0);
  CHECK_THROWS_AS(phi_oracle(Psl2Matrix::L(), 0), std::invalid_argument);
}

TEST_CASE("defect_sample examples") {
  auto pair_sampler = [](std::vector<Psl2Matrix> seq) {
    return [seq, i = std::size_t{0}]() mutable { return seq[i++ % seq.size()]; };
  };
  CHECK(defect_sample(pair_sampler({Psl2Matrix::L(), Psl2Matrix::R()}), 1) == 0.0);
  CHECK(defect_sample(pair_sampler({Psl2Matrix::S(), Psl2Matrix::S()}), 1) == 0.0);
  std::mt19937_64 rng(3);
  const double d = defect_sample([&] { return random_product(rng, 20); }, 500);
  CHECK(d >= 0.0);
  CHECK(d <= oracle::kPhi0Defect);
}

TEST_CASE("frozen defect constant") {
  std::mt19937_64 rng(20240611);
  CHECK(defect_sample([&] { return random_product(rng, 30); }, 10000) == oracle::kPhi0Defect);
}

TEST_CASE("properties over random products") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const Psl2Matrix a = random_product(rng, 30);
    const auto nf = decompose_su(a);
    REQUIRE(evaluate_word(nf) == a);
    CHECK(FreeProductWord::from_letters(nf.letters()) == nf);
    CHECK(rademacher_phi0(a.inverse()) == -rademacher_phi0(a));
  }
  for (int i = 0; i < 200; ++i) {
    const Psl2Matrix a = random_product(rng, 20);
    const Psl2Matrix b = random_product(rng, 20);
    const BigInt phi = phi_homogeneous(a);
    for (int n = 1; n <= 10; ++n) CHECK(phi_homogeneous(a.pow(n)) == n * phi);
    CHECK(phi_homogeneous(b * a * b.inverse()) == phi);
    if (a.pow(6) == Psl2Matrix::identity()) CHECK(phi == 0);
  }
}

TEST_CASE("positive words are exactly homogeneous") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> ex(0, 3);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::pair<int, int>> blocks;
    for (int k = 1 + ex(rng); k > 0; --k) blocks.push_back({ex(rng), ex(rng)});
    const Psl2Matrix w = lr_word(blocks);
    const BigInt p = rademacher_phi0(w);
    for (int n = 1; n <= 6; ++n) CHECK(rademacher_phi0(w.pow(n)) == n * p);
  }
}

TEST_CASE("oracle convergence toward phi") {
  std::mt19937_64 rng(99);
  const Rational k = 3 * oracle::kPhi0Defect;
  for (int i = 0; i < 200; ++i) {
    const Psl2Matrix a = random_product(rng, 20);
    const Rational phi = phi_homogeneous(a);
    Rational prev = -1;
    for (int n : {8, 16, 32, 64}) {
      Rational err = abs(phi_oracle(a, n) - phi);
      CHECK(err <= k / n);
      if (prev >= 0) CHECK(err <= prev);
      prev = err;
    }
  }
}

TEST_CASE("large entries stay exact") {
  const Psl2Matrix big = (Psl2Matrix::L() * Psl2Matrix::R()).pow(60);
  CHECK(big.a() > BigInt("1000000000000000000000"));
  CHECK(evaluate_word(decompose_su(big)) == big);
  CHECK(rademacher_phi0(big) == 0);
  CHECK(phi_homogeneous(big) == 0);
}
