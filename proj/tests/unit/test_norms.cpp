#include <doctest.h>

#include <random>

#include "cyclopadic/errors.hpp"
#include "cyclopadic/norms.hpp"

using namespace cyclopadic;

namespace {

NormProfile profile(int p, Rational m_log, std::vector<Rational> ells) { return {p, m_log, std::move(ells)}; }

NormProfile random_profile(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 12), num(-12, 4), den(1, 4);
  NormProfile prof{2, Rational(0), {Rational(0)}};
  int L = len(rng);
  for (int i = 1; i < L; ++i) prof.ells.emplace_back(num(rng), den(rng));
  Rational m = prof.ells[0];
  for (const auto& e : prof.ells) m = max(m, e);
  prof.m_log = m + Rational(static_cast<std::int64_t>(rng() % 3), 2);
  return prof;
}

// Direct evaluation of l_n + n t over stored n.
Rational stored_max(const NormProfile& p, const Rational& t) {
  Rational best = p.ells[0];
  for (std::size_t n = 1; n < p.ells.size(); ++n) best = max(best, p.ells[n] + Rational(static_cast<std::int64_t>(n)) * t);
  return best;
}

}  // namespace

TEST_CASE("growth modulus examples") {
  auto ones = profile(2, 0, {0, 0, 0, 0});
  CHECK(growth_modulus(ones, Rational(-1, 3)) == Rational(0));
  CHECK(growth_value(ones, Rational(-1, 3)).argmax == std::vector<int>{0});
  CHECK(growth_modulus(ones, Rational(0)) == Rational(0));

  auto step = profile(2, 1, {0, 1});
  CHECK(growth_modulus(step, Rational(-1)) == Rational(0));
  CHECK(growth_value(step, Rational(-1)).argmax == std::vector<int>{0, 1});

  auto run = profile(2, Rational(1, 8), {0, Rational(1, 8)});
  CHECK(growth_modulus(run, Rational(-1, 16)) == Rational(1, 16));

  // Tail not controlled: m_log = 2 at log_r = -1/4 needs L >= 7.
  auto loose = profile(2, 2, {0, 0});
  CHECK_THROWS_AS(growth_modulus(loose, Rational(-1, 4)), InconclusiveTail);
  auto g = growth_value(loose, Rational(-1, 4));
  CHECK_FALSE(g.certified);
  REQUIRE(g.required_last_index.has_value());
  CHECK(*g.required_last_index == 7);
  CHECK_FALSE(growth_value(loose, Rational(0)).required_last_index.has_value());
  CHECK_THROWS_AS(growth_modulus(loose, Rational(1)), std::invalid_argument);
}

TEST_CASE("classification examples") {
  auto ones = profile(2, 0, {0, 0, 0});
  auto r = classify(ones, Rational(-1, 5));
  CHECK(r.kind == RegularityVerdict::Kind::Regular);
  CHECK(r.witness == 0);

  auto c = classify(profile(2, 1, {0, 1}), Rational(-1));
  CHECK(c.kind == RegularityVerdict::Kind::Critical);
  CHECK(c.ties == std::vector<int>{0, 1});

  auto run = classify(profile(2, Rational(1, 8), {0, Rational(1, 8)}), Rational(-1, 16));
  CHECK(run.kind == RegularityVerdict::Kind::Regular);
  CHECK(run.witness == 1);

  auto inc = classify(profile(2, 2, {0, 0}), Rational(-1, 4));
  CHECK(inc.kind == RegularityVerdict::Kind::Inconclusive);
  CHECK_FALSE(inc.reason.empty());
  CHECK_THROWS_AS(classify(ones, Rational(0)), std::invalid_argument);
}

TEST_CASE("critical value examples") {
  CHECK(critical_values(profile(2, 0, {0, 0, 0, 0})).empty());
  CHECK(critical_values(profile(2, 1, {0, 1, 1, 1})) == std::vector<Rational>{Rational(-1)});
  // l = (0, 1, 3/2): candidates -1, -3/4, -1/2; at -3/4 index 1 beats the tie.
  CHECK(critical_values(profile(2, Rational(3, 2), {0, 1, Rational(3, 2)})) ==
        std::vector<Rational>{Rational(-1), Rational(-1, 2)});
  // l = (0, 0, 1): the middle point is under the hull, so only -1/2 remains.
  CHECK(critical_values(profile(2, 1, {0, 0, 1})) == std::vector<Rational>{Rational(-1, 2)});
}

TEST_CASE("profile json") {
  auto j = nlohmann::json::parse(R"({"p": 2, "M_log": "1/8", "ells": ["0", "1/8"]})");
  auto prof = NormProfile::from_json(j);
  CHECK(prof.m_log == Rational(1, 8));
  CHECK(prof.ells.size() == 2);
  CHECK(prof.to_json() == j);
  CHECK_THROWS_AS(NormProfile::from_json(nlohmann::json::parse(R"({"p": 2, "M_log": "0", "ells": ["0", "1"]})")),
                  std::invalid_argument);
}

TEST_CASE("G is non-decreasing and convex on a grid") {
  std::mt19937_64 rng(101);
  for (int it = 0; it < 300; ++it) {
    auto prof = random_profile(rng);
    std::vector<Rational> grid;
    for (int k = 0; k <= 48; ++k) grid.emplace_back(-k, 8);
    std::reverse(grid.begin(), grid.end());  // ascending
    std::vector<Rational> vals;
    for (const auto& t : grid) {
      auto g = growth_value(prof, t);
      CHECK(g.value == stored_max(prof, t));
      vals.push_back(g.value);
    }
    for (std::size_t i = 1; i < vals.size(); ++i) CHECK(vals[i - 1] <= vals[i]);
    for (std::size_t i = 1; i + 1 < vals.size(); ++i) CHECK(vals[i] * Rational(2) <= vals[i - 1] + vals[i + 1]);
  }
}

TEST_CASE("critical values match the slope-change oracle") {
  std::mt19937_64 rng(202);
  for (int it = 0; it < 300; ++it) {
    auto prof = random_profile(rng);
    auto crit = critical_values(prof);
    // Every negative pairwise tie is a candidate; t is critical iff the
    // stored maximum changes slope at t and the tail cannot reach it.
    std::vector<Rational> expect;
    const int L = prof.last_index();
    for (int i = 0; i <= L; ++i)
      for (int j = i + 1; j <= L; ++j) {
        Rational t = (prof.ells[static_cast<std::size_t>(i)] - prof.ells[static_cast<std::size_t>(j)]) / Rational(j - i);
        if (t >= Rational(0)) continue;
        Rational eps(1, 100000);
        Rational left = stored_max(prof, t) - stored_max(prof, t - eps);
        Rational right = stored_max(prof, t + eps) - stored_max(prof, t);
        Rational tail = prof.m_log + Rational(L + 1) * t;
        if (left != right && stored_max(prof, t) >= tail &&
            std::find(expect.begin(), expect.end(), t) == expect.end())
          expect.push_back(t);
      }
    std::sort(expect.begin(), expect.end());
    CHECK(crit == expect);
  }
}

TEST_CASE("weighted norm basics") {
  auto F = make_field(2, 3, 64);
  auto one = CycloElement::one(F);
  // C(x, 2): coefficients delta_2.
  CoeffSeries delta{one, {CycloElement::zero(F), CycloElement::zero(F), one}, TailBound::zero()};
  std::vector<Rational> w{0, Rational(1, 4), Rational(1, 2)};
  CHECK(weighted_norm(delta, w, Rational(1, 2)) == Rational(1, 2));
  // w = 0 recovers the sup norm.
  auto s = q_mahler_coeffs(exponential(one + CycloElement::pi(F)), one, 30);
  std::vector<Rational> zeros(31, Rational(0));
  CHECK(weighted_norm(s, zeros, 0) == -sup_norm_coeffs(s).value());
  CoeffSeries unknown{one, {one}, TailBound::unknown()};
  CHECK_THROWS_AS(weighted_norm(unknown, {0}, 0), InconclusiveTail);
}

TEST_CASE("weighted norm of (1+h)^x equals G at regular radii") {
  std::mt19937_64 rng(303);
  auto F = make_field(2, 3, 96);
  auto one = CycloElement::one(F);
  const int K = 60;
  std::vector<CoeffSeries> series;
  for (int j = 1; j <= 12; ++j) series.push_back(q_mahler_coeffs(exponential(one + CycloElement::pi(F).pow(j)), one, K));
  int regular = 0;
  for (int it = 0; it < 200; ++it) {
    auto prof = random_profile(rng);
    std::vector<Rational> w = prof.ells;
    w.resize(K + 1, prof.m_log);
    for (int j = 1; j <= 12; ++j) {
      Rational log_r(-j, 4);
      auto verdict = classify(prof, log_r);
      if (verdict.kind == RegularityVerdict::Kind::Inconclusive) continue;
      Rational norm = weighted_norm(series[static_cast<std::size_t>(j - 1)], w, prof.m_log);
      Rational G = growth_modulus(prof, log_r);
      CHECK(norm <= G);
      if (verdict.kind == RegularityVerdict::Kind::Regular) {
        CHECK(norm == G);
        ++regular;
      }
    }
  }
  CHECK(regular > 500);
}
