#include <doctest.h>

#include <random>

#include "cyclopadic/errors.hpp"
#include "cyclopadic/schwartz.hpp"

using namespace cyclopadic;

namespace {

Rational v(const CycloElement& a) { return a.valuation().value(); }

SchwartzFunction random_function(const FieldPtr& F, int d, int m, int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-6, 6);
  return SchwartzFunction::tabulate(F, d, m, n, [&](const Point&) {
    return CycloElement::integer(F, dist(rng)) + CycloElement::zeta(F) * CycloElement::integer(F, dist(rng));
  });
}

mpq_class random_rational(int p, std::mt19937_64& rng, int vmin, int vmax) {
  std::uniform_int_distribution<int> vd(vmin, vmax), ud(1, 4 * p);
  int u;
  do u = ud(rng) * (rng() % 2 ? 1 : -1);
  while (u % p == 0);
  int e = vd(rng);
  mpq_class x(u);
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::abs(e)));
  if (e >= 0) x *= pk;
  else x /= pk;
  return x;
}

SymplecticMatrix random_sl2(int p, std::mt19937_64& rng, bool c_zero) {
  mpq_class a = random_rational(p, rng, -1, 1), b = random_rational(p, rng, -1, 1);
  mpq_class c = c_zero ? mpq_class(0) : random_rational(p, rng, -1, 1);
  mpq_class d = (1 + b * c) / a;
  return SymplecticMatrix(1, {a, b, c, d});
}

HeisenbergElement random_heisenberg(int p, int d, std::mt19937_64& rng) {
  HeisenbergElement h;
  for (int i = 0; i < d; ++i) {
    h.a.push_back(rng() % 3 ? random_rational(p, rng, -1, 1) : mpq_class(0));
    h.b.push_back(rng() % 3 ? random_rational(p, rng, -1, 1) : mpq_class(0));
  }
  h.t = random_rational(p, rng, -2, 0);
  return h;
}

// Direct Riemann sum of psi(x.y) f(y) over cosets of p^L in p^{-M}, with
// every point evaluated through f's public interface.
CycloElement brute_fourier(const SchwartzFunction& f, const AdditiveCharacter& psi, const Point& x, int M, int L) {
  const FieldPtr& F = f.field_ptr();
  CharacterValues chi(F, psi);
  const int p = f.prime(), d = f.dimension();
  std::int64_t side = 1;
  for (int i = 0; i < M + L; ++i) side *= p;
  std::int64_t total = 1;
  for (int i = 0; i < d; ++i) total *= side;
  mpz_class pm;
  mpz_ui_pow_ui(pm.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(M));
  CycloElement acc = CycloElement::zero(F);
  for (std::int64_t flat = 0; flat < total; ++flat) {
    Point y;
    std::int64_t rest = flat;
    mpq_class dot = 0;
    for (int i = 0; i < d; ++i) {
      y.push_back(mpq_class(mpz_class(static_cast<long>(rest % side)), pm));
      y.back().canonicalize();
      rest /= side;
      dot += x[static_cast<std::size_t>(i)] * y.back();
    }
    CycloElement fy = f(y);
    if (!fy.is_zero_at_precision()) acc += chi(dot) * fy;
  }
  return acc.scaled_by_p(-static_cast<std::int64_t>(L) * d);
}

int residue_mod3(const mpq_class& x) {
  mpz_class n = x.get_num() * x.get_den() % 3;  // den^{-1} = den mod 3
  return static_cast<int>((n.get_si() % 3 + 3) % 3);
}

}  // namespace

TEST_CASE("indicator functions") {
  auto F = make_field(2, 4, 32);
  auto one = indicator(F, 1, 0);
  CHECK(one.support_exponent() == 0);
  CHECK(one.level_exponent() == 0);
  CHECK(one({mpq_class(0)}).equals_at_precision(CycloElement::one(F)));
  CHECK(one({mpq_class(7)}).equals_at_precision(CycloElement::one(F)));
  CHECK(one({mpq_class(1, 2)}).is_zero_at_precision());
  CHECK(one({mpq_class(5, 3)}).equals_at_precision(CycloElement::one(F)));

  auto f = indicator(F, 1, 2, {mpq_class(1, 2)});
  CHECK(f.support_exponent() == 1);
  CHECK(f.level_exponent() == 2);
  CHECK(f({mpq_class(1, 2)}).equals_at_precision(CycloElement::one(F)));
  CHECK(f({mpq_class(9, 2)}).equals_at_precision(CycloElement::one(F)));
  CHECK(f({mpq_class(5, 2)}).is_zero_at_precision());
  CHECK(f({mpq_class(0)}).is_zero_at_precision());

  auto g = indicator(F, 2, 1);
  CHECK(g.table().size() == 1);
  CHECK(g({mpq_class(2), mpq_class(4)}).equals_at_precision(CycloElement::one(F)));
  CHECK(g({mpq_class(2), mpq_class(3)}).is_zero_at_precision());
}

TEST_CASE("canonical form") {
  auto F = make_field(3, 2, 24);
  auto z = SchwartzFunction::tabulate(F, 1, 2, 2, [&](const Point&) { return CycloElement::zero(F); });
  CHECK(z.is_zero());
  CHECK(z.support_exponent() == 0);
  CHECK(z.level_exponent() == 0);
  // Constant on cosets of 3Z_3, supported in Z_3: stored at (0, 1).
  auto f = SchwartzFunction::tabulate(F, 1, 2, 3, [&](const Point& x) {
    if (rational_valuation(x[0], 3) < 0) return CycloElement::zero(F);
    return CycloElement::integer(F, residue_mod3(x[0]));
  });
  CHECK(f.support_exponent() == 0);
  CHECK(f.level_exponent() == 1);
}

TEST_CASE("Heisenberg group law") {
  std::mt19937_64 rng(11);
  for (int p : {2, 3}) {
    auto F = make_field(p, p == 2 ? 5 : 3, 24);
    AdditiveCharacter psi{p, 1};
    for (int it = 0; it < 60; ++it) {
      auto h1 = random_heisenberg(p, 1, rng), h2 = random_heisenberg(p, 1, rng);
      auto f = random_function(F, 1, 1, 1, rng);
      auto lhs = heisenberg_act(h1, heisenberg_act(h2, f, psi), psi);
      auto rhs = heisenberg_act(h1 * h2, f, psi);
      CHECK(lhs.equals(rhs));
      CHECK(sup_norm(heisenberg_act(h1, f, psi)).value() == sup_norm(f).value());
    }
  }
}

TEST_CASE("Heisenberg action example") {
  auto F = make_field(2, 3, 24);
  AdditiveCharacter psi{2, 1};
  auto f = indicator(F, 1, 0);
  // rho([0, 1/2, 0]) 1_{Z_2}(x) = psi(x/2) = (-1)^x on Z_2.
  auto g = heisenberg_act({{mpq_class(0)}, {mpq_class(1, 2)}, 0}, f, psi);
  CHECK(g({mpq_class(0)}).equals_at_precision(CycloElement::one(F)));
  CHECK(g({mpq_class(1)}).equals_at_precision(-CycloElement::one(F)));
  CHECK(g({mpq_class(1, 2)}).is_zero_at_precision());
  // rho([1/2, 0, 0]) shifts the support.
  auto s = heisenberg_act({{mpq_class(1, 2)}, {mpq_class(0)}, 0}, f, psi);
  CHECK(s({mpq_class(1, 2)}).equals_at_precision(CycloElement::one(F)));
  CHECK(s({mpq_class(0)}).is_zero_at_precision());
}

TEST_CASE("symplectic matrices") {
  CHECK_THROWS_AS(SymplecticMatrix(1, {1, 1, 1, 1}), std::invalid_argument);
  auto g = SymplecticMatrix::parse("2,1;3,2");
  CHECK(g.at(1, 0) == 3);
  CHECK_FALSE(g.c_block_zero());
  CHECK(SymplecticMatrix::J(1).is_J());
  auto J = SymplecticMatrix::J(2);
  auto I = J * J * J * J;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) CHECK(I.at(r, c) == (r == c ? 1 : 0));
  // [w, t] . J = [(-b, a), t].
  auto h = act({{mpq_class(1), mpq_class(2)}, {mpq_class(3), mpq_class(4)}, 5}, J);
  CHECK(h.a == Point{-3, -4});
  CHECK(h.b == Point{1, 2});
  CHECK(h.t == 5);
}

TEST_CASE("Fourier transform of indicators") {
  for (int p : {2, 3}) {
    auto F = make_field(p, 4, 24);
    AdditiveCharacter psi{p, 1};
    CHECK(fourier(indicator(F, 1, 0), psi).equals(indicator(F, 1, 0)));
    for (int n = 1; n <= 3; ++n) {
      // F(1_{p^n Z_p}) = p^{-n} 1_{p^{-n} Z_p}.
      auto img = fourier(indicator(F, 1, n), psi);
      CHECK(img.support_exponent() == n);
      CHECK(img.level_exponent() == -n);
      CHECK(v(img({mpq_class(0)})) == Rational(-n));
      CHECK(sup_norm(img).value() == Rational(-n));
      mpq_class outside(1, 1);
      mpz_class pn;
      mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n + 1));
      outside /= pn;
      CHECK(img({outside}).is_zero_at_precision());
    }
  }
}

TEST_CASE("Fourier transform against a direct sum") {
  std::mt19937_64 rng(5);
  for (int p : {2, 3}) {
    auto F = make_field(p, p == 2 ? 5 : 3, 24);
    for (mpq_class c : {mpq_class(1), mpq_class(-1), mpq_class(p), mpq_class(1, p)}) {
      AdditiveCharacter psi{p, c};
      for (int d : {1, 2}) {
        auto f = random_function(F, d, 1, d == 1 ? 1 : 0, rng);
        SchwartzFunction img = SchwartzFunction::zero(F, d);
        try {
          img = fourier(f, psi);
        } catch (const InsufficientField&) {
          continue;
        }
        for (std::int64_t flat = 0; flat < static_cast<std::int64_t>(img.table().size()); ++flat) {
          Point x = img.point(flat);
          CHECK(img(x).equals_at_precision(brute_fourier(f, psi, x, 2, 2)));
        }
        // A point just outside the stored support, summed finely enough.
        if (d == 1) {
          const int k = img.support_exponent() + 1;
          mpz_class pk;
          mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
          Point far{mpq_class(1) / pk};
          try {
            CHECK(brute_fourier(f, psi, far, 2, k + 2).is_zero_at_precision());
          } catch (const InsufficientField&) {
          }
        }
      }
    }
  }
}

TEST_CASE("Fourier squared is reflection") {
  std::mt19937_64 rng(7);
  for (int p : {2, 3}) {
    auto F = make_field(p, 4, 24);
    AdditiveCharacter psi{p, 1};
    for (int d : {1, 2}) {
      for (int it = 0; it < 4; ++it) {
        auto f = random_function(F, d, 1, 1, rng);
        auto f2 = fourier(fourier(f, psi), psi);
        auto reflected = SchwartzFunction::tabulate(F, d, 1, 1, [&](const Point& x) {
          Point y = x;
          for (auto& t : y) t = -t;
          return f(y);
        });
        CHECK(f2.equals(reflected));
        CHECK(fourier(fourier(f2, psi), psi).equals(f));
      }
    }
  }
}

TEST_CASE("intertwining relation") {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int p : {2, 3}) {
    auto F = make_field(p, p == 2 ? 6 : 4, 24);
    AdditiveCharacter psi{p, 1};
    for (int it = 0; it < 40; ++it) {
      auto g = it == 0 ? SymplecticMatrix::J(1) : random_sl2(p, rng, it % 4 == 0);
      auto h = random_heisenberg(p, 1, rng);
      auto f = random_function(F, 1, 1, 1, rng);
      try {
        bool ok = check_intertwining(g, h, f, psi);
        CHECK(ok);
        ++checked;
      } catch (const InsufficientField&) {
      }
    }
    // d = 2 with J and a parabolic element.
    auto J2 = SymplecticMatrix::J(2);
    std::vector<mpq_class> e(16, 0);
    e[0] = 1; e[1] = 1; e[5] = 1;                     // a = [[1,1],[0,1]]
    e[2] = 1; e[6] = mpq_class(-1, p); e[7] = mpq_class(1, p);  // a b^t = diag(1, 1/p)
    e[10] = 1; e[14] = -1; e[15] = 1;                 // d = (a^t)^{-1}
    SymplecticMatrix P2(2, e);
    for (int it = 0; it < 4; ++it) {
      auto h = random_heisenberg(p, 2, rng);
      auto f = random_function(F, 2, 1, 0, rng);
      CHECK(check_intertwining(J2, h, f, psi));
      CHECK(check_intertwining(P2, h, f, psi));
    }
  }
  CHECK(checked >= 60);
}

TEST_CASE("composition up to a scalar") {
  std::mt19937_64 rng(31);
  for (int p : {2, 3}) {
    auto F = make_field(p, p == 2 ? 6 : 4, 24);
    AdditiveCharacter psi{p, 1};
    for (int it = 0; it < 12; ++it) {
      auto g1 = random_sl2(p, rng, it % 3 == 0), g2 = random_sl2(p, rng, false);
      auto f = random_function(F, 1, 1, 1, rng);
      try {
        auto A = intertwine(g1, intertwine(g2, f, psi), psi);
        auto B = intertwine(g1 * g2, f, psi);
        REQUIRE_FALSE(B.is_zero());
        std::size_t k = 0;
        while (B.table()[k].is_zero_at_precision()) ++k;
        Point x0 = B.point(static_cast<std::int64_t>(k));
        auto lambda = A(x0) * B(x0).inverse();
        auto scaled = SchwartzFunction::tabulate(F, 1, B.support_exponent(), B.level_exponent(),
                                                 [&](const Point& x) { return lambda * B(x); });
        CHECK(A.equals(scaled));
      } catch (const InsufficientField&) {
      }
    }
  }
}

TEST_CASE("c = 0 elements act geometrically") {
  auto F = make_field(3, 3, 24);
  AdditiveCharacter psi{3, 1};
  SymplecticMatrix g(1, {3, 0, 0, mpq_class(1, 3)});
  auto f = indicator(F, 1, 1);
  // T_g f(x) = f(3x) = 1_{Z_3}(x).
  CHECK(intertwine(g, f, psi).equals(indicator(F, 1, 0)));
  SymplecticMatrix u(1, {1, 1, 0, 1});
  auto q = intertwine(u, indicator(F, 1, -1), psi);
  // psi(x^2/2) on 3^{-1} Z_3.
  CharacterValues chi(F, psi);
  for (int j = 0; j < 9; ++j) {
    mpq_class x(j, 3);
    CHECK(q({x}).equals_at_precision(chi(x * x / 2)));
  }
}

TEST_CASE("unsupported and capped operations") {
  auto F = make_field(2, 4, 24);
  AdditiveCharacter psi{2, 1};
  std::vector<mpq_class> e(16, 0);
  // A d = 2 element with c != 0 that is not J.
  e[0] = 1; e[5] = 1; e[10] = 1; e[15] = 1; e[8] = 1;
  SymplecticMatrix g(2, e);
  CHECK_THROWS_AS(intertwine(g, indicator(F, 2, 0), psi), UnsupportedOperation);
  SymplecticMatrix big(1, {mpq_class(1, 1 << 14), 0, 0, 1 << 14});
  CHECK_THROWS_AS(intertwine(big, indicator(F, 1, 0), psi), WindowCapExceeded);
  std::mt19937_64 rng(3);
  CHECK_THROWS_AS(fourier(random_function(F, 1, 3, 2, rng), psi), InsufficientField);
}

TEST_CASE("norm growth under J") {
  for (int p : {2, 3}) {
    auto F = make_field(p, 6, 16);
    AdditiveCharacter psi{p, 1};
    for (int d : {1, 2}) {
      for (int n = 0; n <= (d == 1 ? 6 : 3); ++n) {
        auto w = norm_growth_family(SymplecticMatrix::J(d), n, F, psi);
        CHECK(w.value_at_zero.value() == Rational(-n * d));
        CHECK(w.image_sup_norm.value() == Rational(-n * d));
        CHECK(w.source_sup_norm.value() == Rational(0));
      }
    }
  }
}

TEST_CASE("json output") {
  auto F = make_field(2, 3, 16);
  auto j = indicator(F, 1, 1).to_json();
  CHECK(j["d"] == 1);
  CHECK(j["m"] == -1);
  CHECK(j["n"] == 1);
  CHECK(j["table"].size() == 1);
}
