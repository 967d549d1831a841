#include <algorithm>
#include <atomic>
#include <mutex>
#include <random>
#include <thread>

#include "cyclopadic/cyclotomic.hpp"
#include "cyclopadic/errors.hpp"
#include "cyclopadic/harness.hpp"
#include "cyclopadic/mahler.hpp"
#include "cyclopadic/qcalc.hpp"
#include "cyclopadic/schwartz.hpp"

namespace cyclopadic {

using json = nlohmann::json;

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn, unsigned threads) {
  if (n <= 0) return;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, n));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      std::int64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        next = n;
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

namespace {

template <class T>
T get(const json& cfg, const char* key, T fallback) {
  return cfg.contains(key) ? cfg.at(key).get<T>() : fallback;
}

json finish(const std::string& name, const json& cfg, json cases, std::int64_t passed, std::int64_t failed, json extra = {}) {
  json r;
  r["schema"] = kReportSchema;
  r["campaign"] = name;
  r["config"] = cfg;
  r["cases"] = std::move(cases);
  r["passed"] = passed;
  r["failed"] = failed;
  r["all_pass"] = failed == 0 && passed > 0;
  if (!extra.is_null()) r["summary"] = std::move(extra);
  return r;
}

mpq_class random_rational(int p, std::mt19937_64& rng, int vmin, int vmax) {
  std::uniform_int_distribution<int> vd(vmin, vmax), ud(1, 4 * p);
  int u;
  do u = ud(rng) * (rng() % 2 ? 1 : -1);
  while (u % p == 0);
  int e = vd(rng);
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::abs(e)));
  mpq_class x(u);
  if (e >= 0) x *= pk;
  else x /= pk;
  return x;
}

SchwartzFunction random_function(const FieldPtr& F, int d, int m, int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-9, 9);
  return SchwartzFunction::tabulate(F, d, m, n, [&](const Point&) {
    return CycloElement::integer(F, dist(rng)) + CycloElement::zeta(F) * CycloElement::integer(F, dist(rng));
  });
}

HeisenbergElement random_heisenberg(int p, int d, std::mt19937_64& rng) {
  HeisenbergElement h;
  for (int i = 0; i < d; ++i) {
    h.a.push_back(rng() % 4 ? random_rational(p, rng, -1, 1) : mpq_class(0));
    h.b.push_back(rng() % 4 ? random_rational(p, rng, -1, 1) : mpq_class(0));
  }
  h.t = random_rational(p, rng, -2, 0);
  return h;
}

std::string point_string(const Point& x) {
  std::string s;
  for (const auto& c : x) s += (s.empty() ? "" : ",") + c.get_str();
  return s;
}

json heis_json(const HeisenbergElement& h) { return {{"a", point_string(h.a)}, {"b", point_string(h.b)}, {"t", h.t.get_str()}}; }

// ---------------------------------------------------------------------------

Report beta_formula(const json& in) {
  json cfg = {{"primes", get(in, "primes", std::vector<int>{2, 3, 5})},
              {"max_N", get(in, "max_N", 3)},
              {"precision", get(in, "precision", 64)}};
  std::vector<std::pair<int, int>> fields;
  for (int p : cfg["primes"].get<std::vector<int>>())
    for (int N = 1; N <= cfg["max_N"].get<int>(); ++N) fields.emplace_back(p, N);
  std::vector<json> per(fields.size());
  std::vector<std::int64_t> pass(fields.size()), fail(fields.size());
  parallel_for(static_cast<std::int64_t>(fields.size()), [&](std::int64_t f) {
    auto [p, N] = fields[static_cast<std::size_t>(f)];
    auto F = make_field(p, N, cfg["precision"].get<int>());
    const auto one = CycloElement::one(F), zeta = CycloElement::zeta(F);
    CycloElement prod = one, zi = one;
    json cases = json::array();
    std::int64_t top = 1;
    for (int i = 0; i < N; ++i) top *= p;
    for (std::int64_t n = 1; n < top; ++n) {
      zi = zi * zeta;
      prod = prod * (one - zi);
      Rational v = prod.valuation().value();
      Rational formula = poch_valuation_formula(p, N, n);
      bool ok = v == formula;
      (ok ? pass : fail)[static_cast<std::size_t>(f)]++;
      cases.push_back({{"n", n}, {"v", v.to_string()}, {"formula", formula.to_string()}, {"beta", beta(p, n).value}, {"pass", ok}});
    }
    per[static_cast<std::size_t>(f)] = {{"p", p}, {"N", N}, {"cases", std::move(cases)}};
  });
  std::int64_t P = 0, Fl = 0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    P += pass[i];
    Fl += fail[i];
  }
  return {finish("beta-formula", cfg, per, P, Fl)};
}

Report beta_bound(const json& in) {
  json cfg = {{"primes", get(in, "primes", std::vector<int>{2, 3, 5})},
              {"n_max", get(in, "n_max", std::int64_t{1000000})},
              {"threads", get(in, "threads", 0u)}};
  const std::int64_t n_max = cfg["n_max"].get<std::int64_t>();
  const auto primes = cfg["primes"].get<std::vector<int>>();
  json cases = json::array();
  std::int64_t P = 0, Fl = 0;
  for (int p : primes) {
    const std::int64_t chunk = 4096, chunks = (n_max + chunk - 1) / chunk;
    std::vector<std::int64_t> fails(static_cast<std::size_t>(chunks));
    std::vector<double> min_slack(static_cast<std::size_t>(chunks), 1e300);
    std::vector<std::int64_t> first_fail(static_cast<std::size_t>(chunks), -1);
    parallel_for(chunks, [&](std::int64_t c) {
      for (std::int64_t n = c * chunk + 1; n <= std::min(n_max, (c + 1) * chunk); ++n) {
        BoundCheck b = check_beta_lower_bound(p, n);
        auto ci = static_cast<std::size_t>(c);
        min_slack[ci] = std::min(min_slack[ci], b.slack);
        if (!b.holds) {
          if (first_fail[ci] < 0) first_fail[ci] = n;
          ++fails[ci];
        }
      }
    }, cfg["threads"].get<unsigned>());
    std::int64_t f = 0, first = -1;
    double slack = 1e300;
    for (std::size_t c = 0; c < fails.size(); ++c) {
      f += fails[c];
      slack = std::min(slack, min_slack[c]);
      if (first < 0 && first_fail[c] >= 0) first = first_fail[c];
    }
    Fl += f;
    P += n_max - f;
    json entry = {{"p", p}, {"checked", n_max}, {"failures", f}, {"min_slack", slack}};
    if (first >= 0) entry["first_failure"] = first;
    cases.push_back(entry);
  }
  return {finish("beta-bound", cfg, cases, P, Fl)};
}

Report cor_bound(const json& in) {
  json cfg = {{"p", get(in, "p", 2)},
              {"N", get(in, "N", 13)},
              {"samples", get(in, "samples", 10000)},
              {"sample_N", get(in, "sample_N", 20)},
              {"seed", get(in, "seed", std::uint64_t{1})}};
  const int p = cfg["p"], N = cfg["N"], sN = cfg["sample_N"];
  auto ppow = [&](int k) {
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    return r;
  };
  std::vector<std::pair<int, std::int64_t>> work;  // (N used, n)
  for (std::int64_t n = ppow(8); n < ppow(N); ++n) work.emplace_back(N, n);
  const std::int64_t exhaustive = static_cast<std::int64_t>(work.size());
  std::mt19937_64 rng(cfg["seed"].get<std::uint64_t>());
  std::uniform_int_distribution<std::int64_t> dist(ppow(8), ppow(sN) - 1);
  for (int i = 0; i < cfg["samples"].get<int>(); ++i) work.emplace_back(sN, dist(rng));
  std::vector<char> ok(work.size());
  std::vector<double> slack(work.size());
  parallel_for(static_cast<std::int64_t>(work.size()), [&](std::int64_t i) {
    auto [NN, n] = work[static_cast<std::size_t>(i)];
    BoundCheck b = check_corollary_bound(p, NN, n);
    ok[static_cast<std::size_t>(i)] = b.holds;
    slack[static_cast<std::size_t>(i)] = b.slack;
  });
  std::int64_t f = 0;
  json failures = json::array();
  double min_slack = 1e300;
  for (std::size_t i = 0; i < work.size(); ++i) {
    min_slack = std::min(min_slack, slack[i]);
    if (!ok[i]) {
      ++f;
      if (failures.size() < 20) failures.push_back(work[i].second);
    }
  }
  json cases = {{{"range", "exhaustive"}, {"from", ppow(8)}, {"to", ppow(N) - 1}, {"count", exhaustive}},
                {{"range", "sampled"}, {"from", ppow(8)}, {"to", ppow(sN) - 1}, {"count", cfg["samples"]}}};
  return {finish("cor-bound", cfg, cases, static_cast<std::int64_t>(work.size()) - f, f,
                 {{"min_slack", min_slack}, {"failures", failures}})};
}

Report qmahler_closed_form(const json& in) {
  json cfg = {{"fields", get(in, "fields", std::vector<std::vector<int>>{{2, 2}, {2, 3}, {3, 2}, {3, 3}})},
              {"j", get(in, "j", std::vector<int>{1, 3, 5})},
              {"K", get(in, "K", 100)},
              {"precision", get(in, "precision", 256)}};
  struct Case {
    int p, N, j;
  };
  std::vector<Case> work;
  for (const auto& f : cfg["fields"].get<std::vector<std::vector<int>>>())
    for (int j : cfg["j"].get<std::vector<int>>()) work.push_back({f.at(0), f.at(1), j});
  const int K = cfg["K"];
  std::vector<json> out(work.size());
  std::vector<std::int64_t> fails(work.size());
  parallel_for(static_cast<std::int64_t>(work.size()), [&](std::int64_t ci) {
    const Case c = work[static_cast<std::size_t>(ci)];
    auto F = make_field(c.p, c.N, cfg["precision"].get<int>());
    const auto zeta = CycloElement::zeta(F), q = zeta + CycloElement::pi(F).pow(c.j);
    // Route 1: T applied to sampled values of zeta^x.
    Sampled s;
    CycloElement zx = CycloElement::one(F);
    for (int x = 0; x <= K; ++x) {
      s.values.push_back(zx);
      zx = zx * zeta;
    }
    CoeffSeries sampled = q_mahler_coeffs(FunctionModel(s), q, K);
    // Route 2: the exponential-sum model.
    CoeffSeries expo = q_mahler_coeffs(exponential(zeta), q, K);
    std::int64_t nonzero = 0, bad = 0, first_bad = -1;
    for (int k = 0; k <= K; ++k) {
      CycloElement closed = zq_coefficient(zeta, q, k);
      bool ok = sampled.coeffs[static_cast<std::size_t>(k)].equals_at_precision(closed) &&
                expo.coeffs[static_cast<std::size_t>(k)].equals_at_precision(closed);
      if (!closed.is_zero_at_precision()) ++nonzero;
      if (!ok) {
        ++bad;
        if (first_bad < 0) first_bad = k;
      }
    }
    // Every coefficient must be decided, not vacuously zero at precision.
    if (nonzero != K + 1) ++bad;
    fails[static_cast<std::size_t>(ci)] = bad;
    json e = {{"p", c.p}, {"N", c.N}, {"j", c.j}, {"K", K}, {"nonzero_at_precision", nonzero}, {"mismatches", bad},
              {"v_last", zq_coefficient(zeta, q, K).valuation().to_string()}};
    if (first_bad >= 0) e["first_mismatch"] = first_bad;
    out[static_cast<std::size_t>(ci)] = e;
  });
  std::int64_t f = 0;
  for (auto b : fails) f += b ? 1 : 0;
  return {finish("qmahler-closed-form", cfg, out, static_cast<std::int64_t>(work.size()) - f, f)};
}

Report fourier_suite(const json& in) {
  json cfg = {{"p", get(in, "p", 2)},
              {"N", get(in, "N", 6)},
              {"precision", get(in, "precision", 32)},
              {"trials_d1", get(in, "trials_d1", 100)},
              {"trials_d2", get(in, "trials_d2", 20)},
              {"n_max", get(in, "n_max", 6)},
              {"seed", get(in, "seed", std::uint64_t{7})}};
  const int p = cfg["p"];
  auto F = make_field(p, cfg["N"].get<int>(), cfg["precision"].get<int>());
  AdditiveCharacter psi{p, 1};
  const int t1 = cfg["trials_d1"], t2 = cfg["trials_d2"];
  // Per-trial seeds keep the report independent of scheduling.
  std::vector<json> out(static_cast<std::size_t>(t1 + t2));
  std::vector<char> ok(out.size());
  parallel_for(static_cast<std::int64_t>(out.size()), [&](std::int64_t i) {
    const int d = i < t1 ? 1 : 2;
    std::mt19937_64 rng(cfg["seed"].get<std::uint64_t>() * 1000003 + static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> md(0, d == 1 ? 2 : 1), nd(0, d == 1 ? 2 : 1);
    auto f = random_function(F, d, md(rng), nd(rng), rng);
    auto h = random_heisenberg(p, d, rng);
    auto ff = fourier(fourier(f, psi), psi);
    auto reflected = SchwartzFunction::tabulate(F, d, f.support_exponent(), f.level_exponent(), [&](const Point& x) {
      Point y = x;
      for (auto& c : y) c = -c;
      return f(y);
    });
    bool inv = ff.equals(reflected);
    bool inter = check_intertwining(SymplecticMatrix::J(d), h, f, psi);
    ok[static_cast<std::size_t>(i)] = inv && inter;
    out[static_cast<std::size_t>(i)] = {{"trial", i},
                                        {"d", d},
                                        {"m", f.support_exponent()},
                                        {"n", f.level_exponent()},
                                        {"h", heis_json(h)},
                                        {"double_transform", inv},
                                        {"intertwining", inter}};
  });
  json cases = json::array();
  std::int64_t pass = 0, fail = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    cases.push_back(out[i]);
    (ok[i] ? pass : fail)++;
  }
  // F(phi_n) = p^n 1_{p^n Z_p}: sup norm p^{-n}.
  for (int n = 1; n <= cfg["n_max"].get<int>(); ++n) {
    auto img = fourier(indicator(F, 1, -n), psi);
    Rational v = sup_norm(img).value();
    bool good = v == Rational(n) && img({mpq_class(0)}).valuation().value() == Rational(n) &&
                img.support_exponent() == -n;
    (good ? pass : fail)++;
    cases.push_back({{"phi_n", n}, {"sup_norm_valuation", v.to_string()}, {"expected", std::to_string(n)}, {"pass", good}});
  }
  return {finish("fourier-suite", cfg, cases, pass, fail)};
}

Report intertwine_suite(const json& in) {
  json cfg = {{"p", get(in, "p", 2)},
              {"N", get(in, "N", 8)},
              {"precision", get(in, "precision", 24)},
              {"trials", get(in, "trials", 50)},
              {"seed", get(in, "seed", std::uint64_t{7})},
              {"g", get(in, "g", std::string())}};
  const int p = cfg["p"];
  auto F = make_field(p, cfg["N"].get<int>(), cfg["precision"].get<int>());
  AdditiveCharacter psi{p, 1};
  const std::string gtext = cfg["g"];
  const int trials = cfg["trials"];
  std::vector<json> out(static_cast<std::size_t>(trials));
  std::vector<int> status(out.size());  // 1 pass, 0 fail, 2 skipped
  parallel_for(trials, [&](std::int64_t i) {
    std::mt19937_64 rng(cfg["seed"].get<std::uint64_t>() * 1000003 + static_cast<std::uint64_t>(i));
    SymplecticMatrix g = SymplecticMatrix::identity(1);
    if (!gtext.empty()) {
      g = SymplecticMatrix::parse(gtext);
    } else {
      mpq_class a = random_rational(p, rng, -1, 1), b = random_rational(p, rng, -1, 1);
      mpq_class c = i % 4 == 0 ? mpq_class(0) : random_rational(p, rng, -1, 1);
      g = SymplecticMatrix(1, {a, b, c, (1 + b * c) / a});
    }
    auto f = random_function(F, g.dimension(), 1, 1, rng);
    auto h = random_heisenberg(p, g.dimension(), rng);
    json e = {{"trial", i}, {"h", heis_json(h)}};
    std::string gs;
    for (int r = 0; r < 2 * g.dimension(); ++r)
      for (int c = 0; c < 2 * g.dimension(); ++c) gs += (gs.empty() ? "" : (c == 0 ? ";" : ",")) + g.at(r, c).get_str();
    e["g"] = gs;
    try {
      bool good = check_intertwining(g, h, f, psi);
      status[static_cast<std::size_t>(i)] = good ? 1 : 0;
      e["intertwining"] = good;
    } catch (const InsufficientField& ex) {
      status[static_cast<std::size_t>(i)] = 2;
      e["skipped"] = ex.what();
    } catch (const WindowCapExceeded& ex) {
      status[static_cast<std::size_t>(i)] = 2;
      e["skipped"] = ex.what();
    }
    out[static_cast<std::size_t>(i)] = e;
  });
  std::int64_t pass = 0, fail = 0, skipped = 0;
  for (int s : status) (s == 1 ? pass : s == 0 ? fail : skipped)++;
  return {finish("intertwine-suite", cfg, out, pass, fail, {{"skipped", skipped}})};
}

Report norm_growth(const json& in) {
  json cfg = {{"p", get(in, "p", 2)},
              {"N", get(in, "N", 6)},
              {"d", get(in, "d", 1)},
              {"n_max", get(in, "n_max", 6)},
              {"precision", get(in, "precision", 16)}};
  const int p = cfg["p"], d = cfg["d"];
  auto F = make_field(p, cfg["N"].get<int>(), cfg["precision"].get<int>());
  AdditiveCharacter psi{p, 1};
  json cases = json::array();
  std::int64_t pass = 0, fail = 0;
  for (int n = 0; n <= cfg["n_max"].get<int>(); ++n) {
    auto w = norm_growth_family(SymplecticMatrix::J(d), n, F, psi);
    const Rational expect(-static_cast<std::int64_t>(n) * d);
    bool good = w.value_at_zero.value() == expect && w.image_sup_norm.value() == expect &&
                w.source_sup_norm.value() == Rational(0);
    (good ? pass : fail)++;
    cases.push_back({{"n", n},
                     {"v_value_at_zero", w.value_at_zero.value().to_string()},
                     {"v_image_sup", w.image_sup_norm.value().to_string()},
                     {"v_source_sup", w.source_sup_norm.value().to_string()},
                     {"expected", expect.to_string()},
                     {"pass", good}});
  }
  return {finish("norm-growth", cfg, cases, pass, fail)};
}

}  // namespace

std::vector<std::string> campaign_names() {
  return {"beta-formula", "beta-bound", "cor-bound", "qmahler-closed-form", "fourier-suite", "intertwine-suite", "norm-growth"};
}

Report run_campaign(const std::string& name, const json& config) {
  if (!config.is_object()) throw std::invalid_argument("campaign config must be a JSON object");
  try {
    if (name == "beta-formula") return beta_formula(config);
    if (name == "beta-bound") return beta_bound(config);
    if (name == "cor-bound") return cor_bound(config);
    if (name == "qmahler-closed-form") return qmahler_closed_form(config);
    if (name == "fourier-suite") return fourier_suite(config);
    if (name == "intertwine-suite") return intertwine_suite(config);
    if (name == "norm-growth") return norm_growth(config);
  } catch (const json::exception& ex) {
    throw std::invalid_argument("campaign " + name + ": bad configuration: " + ex.what());
  }
  throw std::invalid_argument("unknown campaign '" + name + "'");
}

}  // namespace cyclopadic
