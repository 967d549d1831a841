#include <doctest.h>

#include <random>
#include <vector>

#include "cyclopadic/cyclotomic.hpp"
#include "cyclopadic/errors.hpp"
#include "cyclopadic/json_io.hpp"
#include "cyclopadic/resultant.hpp"

using namespace cyclopadic;

namespace {

CycloElement random_element(const FieldPtr& F, std::mt19937_64& rng, int digits = 4) {
  mpz_class bound = ipow(F->prime(), digits);
  std::uniform_int_distribution<long> coef(-bound.get_si(), bound.get_si());
  std::uniform_int_distribution<int> shift(-2, 2);
  std::vector<mpz_class> c(static_cast<std::size_t>(F->degree()));
  for (auto& x : c) x = coef(rng);
  return CycloElement::from_pi_basis(F, c, shift(rng));
}

Rational v(const CycloElement& a) { return a.valuation().value(); }

}  // namespace

TEST_CASE("make_field builds the Eisenstein polynomial") {
  auto F21 = make_field(2, 1, 32);
  CHECK(F21->degree() == 1);
  CHECK(F21->eisenstein() == std::vector<mpz_class>{2, 1});

  auto F22 = make_field(2, 2, 32);
  CHECK(F22->degree() == 2);
  CHECK(F22->eisenstein() == std::vector<mpz_class>{2, 2, 1});

  auto F32 = make_field(3, 2, 32);
  CHECK(F32->degree() == 6);
  CHECK(F32->eisenstein()[0] == 3);

  for (int p : {2, 3, 5})
    for (int N : {1, 2, 3}) {
      auto F = make_field(p, N, 16);
      const auto& E = F->eisenstein();
      CHECK(E.back() == 1);
      CHECK(padic_valuation(E[0], p) == 1);
      for (int i = 0; i < F->degree(); ++i) CHECK(E[static_cast<std::size_t>(i)] % p == 0);
      CHECK(F->lambda() == Rational(1, F->degree()));
    }

  CHECK_THROWS_AS(make_field(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_field(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_field(2, 1, kMaxPrecision + 1), std::out_of_range);
}

TEST_CASE("ring operations") {
  for (int p : {2, 3, 5})
    for (int N : {1, 2, 3}) {
      auto F = make_field(p, N, 20);
      auto z = CycloElement::zeta(F);
      CHECK((z * CycloElement::zeta_power(F, F->root_order() - 1)).equals_at_precision(CycloElement::one(F)));
      auto d = (z - CycloElement::one(F)) + (CycloElement::one(F) - z);
      CHECK(d.is_zero_at_precision());
      // zeta^{p^N} = 1, zeta^{p^{N-1}} != 1.
      CHECK(z.pow(F->root_order()).equals_at_precision(CycloElement::one(F)));
      CHECK_FALSE(z.pow(F->root_order() / p).equals_at_precision(CycloElement::one(F)));
      // times_zeta agrees with multiplication.
      std::mt19937_64 rng(static_cast<unsigned>(p * 10 + N));
      for (int t = 0; t < 20; ++t) {
        auto a = random_element(F, rng);
        CHECK(a.times_zeta().equals_at_precision(a * z));
      }
    }

  auto F = make_field(2, 2, 32);
  auto z = CycloElement::zeta(F);
  auto sq = z * z;
  CHECK(sq.equals_at_precision(CycloElement::integer(F, -1)));
  CHECK(sq.coefficients()[1] == 0);
}

TEST_CASE("Phi_{p^N}(zeta) vanishes") {
  for (int p : {2, 3, 5})
    for (int N : {1, 2, 3}) {
      auto F = make_field(p, N, 24);
      std::int64_t step = F->root_order() / p;
      CycloElement sum = CycloElement::zero(F);
      for (int j = 0; j < p; ++j) sum += CycloElement::zeta_power(F, j * step);
      CHECK(sum.is_zero_at_precision());
    }
}

TEST_CASE("inverse") {
  auto F = make_field(2, 2, 32);
  auto one = CycloElement::one(F);
  auto z = CycloElement::zeta(F);
  CHECK(invert(one).equals_at_precision(one));
  CHECK(invert(z).equals_at_precision(CycloElement::zeta_power(F, 3)));
  auto w = one - z;
  CHECK((invert(w) * w).equals_at_precision(one));
  CHECK_THROWS_AS(invert(CycloElement::zero(F)), InsufficientPrecision);

  for (int p : {2, 3, 5})
    for (int N : {1, 2, 3}) {
      auto G = make_field(p, N, 30);
      std::mt19937_64 rng(static_cast<unsigned>(p * 100 + N));
      for (int t = 0; t < 30; ++t) {
        auto a = random_element(G, rng);
        if (a.is_zero_at_precision()) continue;
        auto b = a * invert(a);
        // The product is 1 up to the precision of the inverse.
        CHECK((b - CycloElement::one(G)).valuation().lower_bound() >= Rational(10));
      }
    }
}

TEST_CASE("valuation examples") {
  auto F = make_field(2, 2, 32);
  auto z = CycloElement::zeta(F);
  auto one = CycloElement::one(F);
  CHECK(v(one - z) == Rational(1, 2));
  CHECK(v(CycloElement::integer(F, 2)) == Rational(1));
  CHECK(v((one - z) * (one - z * z)) == Rational(3, 2));
  CHECK(valuation_by_resultant((one - z) * (one - z * z)).value() == Rational(3, 2));
  CHECK(CycloElement::zero(F).valuation().is_zero_at_precision());
  CHECK(CycloElement::zero(F).valuation().to_string() == "inf");

  for (int p : {2, 3, 5})
    for (int N : {1, 2, 3}) {
      auto G = make_field(p, N, 16);
      auto pz = CycloElement::one(G) - CycloElement::zeta(G);
      CHECK(v(pz) == G->lambda());
    }
}

TEST_CASE("valuation of 1 - zeta^m") {
  for (int p : {2, 3, 5})
    for (int N : {1, 2, 3}) {
      auto F = make_field(p, N, 16);
      auto one = CycloElement::one(F);
      auto zm = one;
      for (std::int64_t m = 1; m < F->root_order(); ++m) {
        zm = zm.times_zeta();
        std::int64_t scale = 1, t = m;
        while (t % p == 0) {
          t /= p;
          scale *= p;
        }
        CHECK(v(one - zm) == F->lambda() * Rational(scale));
      }
    }
}

TEST_CASE("resultant oracle") {
  auto F = make_field(3, 1, 32);
  auto one = CycloElement::one(F);
  CHECK(valuation_by_resultant(one - CycloElement::zeta(F)).value() == Rational(1, 2));
  CHECK(valuation_by_resultant(CycloElement::integer(F, 3)).value() == Rational(1));
  CHECK(valuation_by_resultant(CycloElement::zeta(F)).value() == Rational(0));
}

TEST_CASE("valuation properties on random elements") {
  for (int p : {2, 3, 5})
    for (int N : {1, 2, 3}) {
      auto F = make_field(p, N, 24);
      std::mt19937_64 rng(static_cast<unsigned>(7919 * p + N));
      const int trials = 1000;
      for (int t = 0; t < trials; ++t) {
        auto a = random_element(F, rng);
        auto b = random_element(F, rng);
        if (a.is_zero_at_precision() || b.is_zero_at_precision()) continue;
        CHECK(v(a * b) == v(a) + v(b));
        CHECK(valuation_by_resultant(a).value() == v(a));
        auto s = a + b;
        if (!s.is_zero_at_precision()) {
          CHECK(v(s) >= min(v(a), v(b)));
          if (v(a) != v(b)) CHECK(v(s) == min(v(a), v(b)));
        }
      }
    }
}

TEST_CASE("embed_up") {
  for (int p : {2, 3})
    for (int N : {1, 2}) {
      auto F = make_field(p, N, 20);
      auto G = make_field(p, N + 1, 20);
      CHECK(embed_up(CycloElement::one(F), G).equals_at_precision(CycloElement::one(G)));
      CHECK(embed_up(CycloElement::zeta(F), G).equals_at_precision(CycloElement::zeta_power(G, p)));
      auto w = CycloElement::one(F) - CycloElement::zeta(F);
      CHECK(v(embed_up(w, G)) == F->lambda());
      std::mt19937_64 rng(static_cast<unsigned>(p + 31 * N));
      for (int t = 0; t < 20; ++t) {
        auto a = random_element(F, rng, 3);
        auto b = random_element(F, rng, 3);
        CHECK(embed_up(a * b, G).equals_at_precision(embed_up(a, G) * embed_up(b, G)));
        CHECK(embed_up(a + b, G).equals_at_precision(embed_up(a, G) + embed_up(b, G)));
        if (!a.is_zero_at_precision()) CHECK(v(embed_up(a, G)) == v(a));
      }
      CHECK_THROWS_AS(embed_up(CycloElement::one(G), F), std::invalid_argument);
    }
}

TEST_CASE("zeta basis conversion") {
  auto F = make_field(3, 2, 20);
  std::vector<mpq_class> c{mpq_class(1, 2), 0, mpq_class(-3)};
  auto a = CycloElement::from_zeta_basis(F, c);
  auto z = CycloElement::zeta(F);
  auto expect = CycloElement::rational(F, mpq_class(1, 2)) - CycloElement::integer(F, 3) * z * z;
  CHECK(a.equals_at_precision(expect));
}

TEST_CASE("precision tracking") {
  auto F = make_field(2, 3, 10);
  auto one = CycloElement::one(F);
  CHECK(one.absolute_precision() == 10);
  auto big = CycloElement::integer(F, 1024);  // 2^10
  CHECK(big.shift() == 10);
  CHECK((big - big).is_zero_at_precision());
  // A difference that lands beyond the tracked digits is not an exact zero.
  auto t = one + big - one;
  CHECK(t.is_zero_at_precision());
  CHECK_FALSE(t.is_exact_zero());
  CHECK_THROWS_AS((void)t.valuation().value(), InsufficientPrecision);
  CHECK(one.valuation() < t.valuation());
  CHECK_THROWS_AS((void)(t.valuation() < t.valuation()), InsufficientPrecision);
}

TEST_CASE("json round trip") {
  for (int p : {2, 5}) {
    auto F = make_field(p, 2, 12);
    std::mt19937_64 rng(static_cast<unsigned>(p));
    for (int t = 0; t < 20; ++t) {
      auto a = random_element(F, rng);
      auto j = element_to_json(a);
      auto b = element_from_json(j, F);
      CHECK(b.equals_at_precision(a));
      CHECK(b.absolute_precision() == a.absolute_precision());
    }
    auto z = element_from_json(element_to_json(CycloElement::zero(F)), F);
    CHECK(z.is_exact_zero());
  }
}
