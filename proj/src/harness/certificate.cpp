#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "cyclopadic/cyclotomic.hpp"
#include "cyclopadic/errors.hpp"
#include "cyclopadic/harness.hpp"
#include "cyclopadic/qcalc.hpp"

namespace cyclopadic {

namespace {

using json = nlohmann::json;

mpq_class to_mpq(const Rational& r) {
  mpq_class q(mpz_class(static_cast<long>(r.num())), mpz_class(static_cast<long>(r.den())));
  q.canonicalize();
  return q;
}

mpq_class parse_mpq(const json& j) {
  mpq_class q(j.get<std::string>());
  q.canonicalize();
  return q;
}

int vp(std::int64_t i, int p) {
  int v = 0;
  while (i % p == 0) {
    i /= p;
    ++v;
  }
  return v;
}

mpz_class zpow(int p, int k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return r;
}

// lambda = 1 / (p^{N-1} (p - 1)).
mpq_class lambda_of(int p, int N) { return mpq_class(1) / mpq_class(zpow(p, N - 1) * (p - 1)); }

// lambda * p^{v_p(i)} = v(1 - zeta^i) for 1 <= i < p^N.
mpq_class v_one_minus_zeta_power(const mpq_class& lambda, int p, std::int64_t i) { return lambda * zpow(p, vp(i, p)); }

json condition(const std::string& name, const std::string& lhs, const std::string& rel, const std::string& rhs, bool holds) {
  return {{"name", name}, {"lhs", lhs}, {"relation", rel}, {"rhs", rhs}, {"holds", holds}};
}

struct Common {
  mpq_class lambda;
  Rational G;
  int witness = -1;
  json conditions = json::array();
};

// Preconditions shared by both modes; every violated one is named.
Common check_common(const MainIneqConfig& cfg) {
  std::vector<std::string> bad;
  if (cfg.p < 2 || !is_prime(cfg.p)) throw PreconditionError("p must be prime");
  if (cfg.N < 1) throw PreconditionError("N must be >= 1");
  if (cfg.profile.p != cfg.p) bad.push_back("profile prime differs from p");
  if (cfg.profile.ells.empty() || cfg.profile.ells[0] != Rational(0)) bad.push_back("profile not normalized (l_0 != 0)");
  if (cfg.v_h <= Rational(0)) bad.push_back("v_h must be positive (s < 1)");
  Common c;
  c.lambda = lambda_of(cfg.p, cfg.N);
  const mpq_class vh = to_mpq(cfg.v_h);
  const bool c_s = vh <= mpq_class(1, cfg.p - 1);
  c.conditions.push_back(condition("s >= p^{-1/(p-1)}", cfg.v_h.to_string(), "<=", mpq_class(1, cfg.p - 1).get_str(), c_s));
  if (!c_s) bad.push_back("v_h <= 1/(p-1)");
  const bool c1 = c.lambda < vh;
  c.conditions.push_back(condition("|1 - zeta| > s", c.lambda.get_str(), "<", cfg.v_h.to_string(), c1));
  if (!c1) bad.push_back("condition 1: lambda < v_h");
  if (bad.empty()) {
    auto verdict = classify(cfg.profile, -cfg.v_h);
    bool regular = verdict.kind == RegularityVerdict::Kind::Regular;
    c.conditions.push_back(condition("s regular", to_string(verdict.kind), "==", "regular", regular));
    if (!regular) {
      bad.push_back("s is not a regular value (" + to_string(verdict.kind) + (verdict.reason.empty() ? "" : ": " + verdict.reason) + ")");
    } else {
      c.witness = verdict.witness;
      c.G = growth_modulus(cfg.profile, -cfg.v_h);
      bool pos = c.G > Rational(0);
      c.conditions.push_back(condition("G(s) > 1", c.G.to_string(), ">", "0", pos));
      if (!pos) bad.push_back("G(s) > 1 fails (log G = " + c.G.to_string() + ")");
    }
  }
  if (!bad.empty()) {
    std::string msg = "main inequality preconditions violated:";
    for (const auto& b : bad) msg += " [" + b + "]";
    throw PreconditionError(msg);
  }
  return c;
}

json head(const MainIneqConfig& cfg, const Common& c, const char* mode) {
  json j;
  j["schema"] = kCertificateSchema;
  j["mode"] = mode;
  j["config"] = cfg.to_json();
  j["lambda"] = c.lambda.get_str();
  j["G"] = c.G.to_string();
  j["regular_witness"] = c.witness;
  j["conditions"] = c.conditions;
  return j;
}

json low_records(const Common& c, const std::string& v_zeta, const std::string& v_q) {
  json r = json::array();
  r.push_back({{"k", 0}, {"kind", "constant"}, {"U", "0"}, {"holds", Rational(0) < c.G}});
  r.push_back({{"k", 1}, {"kind", "linear"}, {"v_zeta_minus_1", v_zeta}, {"v_q_minus_1", v_q}, {"U", c.G.to_string()},
               {"holds", v_zeta == v_q}});
  return r;
}

}  // namespace

json MainIneqConfig::to_json() const {
  return {{"p", p},
          {"N", N},
          {"v_h", v_h.to_string()},
          {"profile", profile.to_json()},
          {"mode", mode == Mode::Exact ? "exact" : "asymptotic"},
          {"precision", precision},
          {"k_cutoff", k_cutoff},
          {"exhaustive_limit", exhaustive_limit},
          {"samples", samples},
          {"seed", seed}};
}

MainIneqConfig MainIneqConfig::from_json(const json& j) {
  MainIneqConfig c;
  c.p = j.at("p").get<int>();
  c.N = j.at("N").get<int>();
  c.v_h = Rational::parse(j.at("v_h").get<std::string>());
  c.profile = NormProfile::from_json(j.at("profile"));
  std::string mode = j.value("mode", "exact");
  if (mode == "exact") c.mode = Mode::Exact;
  else if (mode == "asymptotic") c.mode = Mode::Asymptotic;
  else throw std::invalid_argument("unknown mode '" + mode + "'");
  c.precision = j.value("precision", 0);
  c.k_cutoff = j.value("k_cutoff", std::int64_t{0});
  c.exhaustive_limit = j.value("exhaustive_limit", std::int64_t{1000000});
  c.samples = j.value("samples", 2000);
  c.seed = j.value("seed", std::uint64_t{1});
  return c;
}

Certificate main_inequality_exact(const MainIneqConfig& cfg) {
  Common c = check_common(cfg);
  const mpz_class e_big = zpow(cfg.p, cfg.N - 1) * (cfg.p - 1);
  if (e_big > 2048) throw PreconditionError("exact mode needs e = p^{N-1}(p-1) <= 2048");
  const std::int64_t e = e_big.get_si();
  const Rational he = cfg.v_h * Rational(e);
  if (!he.is_integer()) throw PreconditionError("v_h * e must be an integer so that h = pi^{v_h e} lies in K_N");
  const std::int64_t pN = zpow(cfg.p, cfg.N).get_si();
  const std::int64_t K0 = cfg.k_cutoff > 0 ? cfg.k_cutoff : pN;
  if (K0 < 2) throw PreconditionError("k_cutoff must be >= 2");

  auto F = make_field(cfg.p, cfg.N, cfg.precision > 0 ? cfg.precision : 64);
  const auto one = CycloElement::one(F), zeta = CycloElement::zeta(F);
  const auto h = CycloElement::pi(F).pow(he.num());
  const auto q = zeta + h;
  const Rational lambda(1, e);
  const mpq_class vh = to_mpq(cfg.v_h);
  // Middle range 1 < k <= (1/lambda) log_p(1/sqrt s) = v_h / (2 lambda).
  const std::int64_t I = (cfg.v_h / (Rational(2) * lambda)).floor();

  json cert = head(cfg, c, "exact");
  json records = low_records(c, (zeta - one).valuation().value().to_string(), (q - one).valuation().value().to_string());

  CycloElement coeff = zeta - one;  // <zeta, q>_1
  CycloElement qk = q;              // q^k
  CycloElement qq = one - q;        // (q; q)_1
  Rational prev_v = coeff.valuation().value();
  Rational last_U;
  for (std::int64_t k = 2; k <= K0; ++k) {
    coeff = coeff * (zeta - qk);  // <zeta, q>_k = prod_{i<k} (zeta - q^i)
    qk = qk * q;
    const CycloElement one_minus_qk = one - qk;
    qq = qq * one_minus_qk;
    const Rational v = coeff.valuation().value();
    const Rational U = cfg.profile.m_log - v;
    json r = {{"k", k}, {"kind", "exact"}, {"v", v.to_string()}, {"U", U.to_string()}, {"holds", U < c.G}};
    if (k <= I) {
      const Rational ratio = v - qq.valuation().value();
      mpq_class formula = c.lambda + vh - v_one_minus_zeta_power(c.lambda, cfg.p, k - 1) -
                          v_one_minus_zeta_power(c.lambda, cfg.p, k);
      r["v_ratio"] = ratio.to_string();
      r["formula_ratio"] = formula.get_str();
      r["v_one_minus_q_k"] = one_minus_qk.valuation().value().to_string();
      r["formula_one_minus_q_k"] = v_one_minus_zeta_power(c.lambda, cfg.p, k).get_str();
      r["holds"] = r["holds"].get<bool>() && to_mpq(ratio) == formula && formula >= vh / 2;
    }
    if (!r["holds"].get<bool>())
      throw InequalityFailure(k, "main inequality fails at k = " + std::to_string(k) + ": v(<zeta,q>_k) = " +
                                     v.to_string() + ", U_k = " + U.to_string() + ", G(s) = " + c.G.to_string());
    if (v < prev_v) throw std::logic_error("valuation of <zeta,q>_k decreased; monotonicity violated");
    prev_v = v;
    last_U = U;
    records.push_back(std::move(r));
  }
  cert["records"] = std::move(records);
  cert["tail"] = {{"cutoff", K0},
                  {"rule", "monotone: <zeta,q>_{k+1} = <zeta,q>_k (zeta - q^k) and |zeta - q^k| <= 1, so U_k <= U_cutoff"},
                  {"holds", last_U < c.G}};
  cert["valid"] = last_U < c.G;
  return {std::move(cert)};
}

Certificate main_inequality_asymptotic(const MainIneqConfig& cfg) {
  if (zpow(cfg.p, cfg.N) >= mpz_class(1) << 62) throw PreconditionError("asymptotic mode needs p^N < 2^62");
  Common c = check_common(cfg);
  const int p = cfg.p;
  const mpq_class lambda = c.lambda, vh = to_mpq(cfg.v_h), mlog = to_mpq(cfg.profile.m_log);
  const std::int64_t pN = zpow(p, cfg.N).get_si();
  json cert = head(cfg, c, "asymptotic");
  bool ok = true;

  // Condition 2: alpha = (1/(2 lambda)) log_p(1/sqrt s) = v_h / (4 lambda) > p^8.
  const mpq_class alpha = vh / (4 * lambda);
  const mpq_class p8(zpow(p, 8));
  bool c2 = alpha > p8;
  cert["conditions"].push_back(condition("alpha > p^8", alpha.get_str(), ">", p8.get_str(), c2));
  // Condition 3: (lambda/4) alpha log_p(alpha) >= log_p(M / sqrt s) = M_log + v_h/2.
  const mpq_class rhs3 = mlog + vh / 2;
  bool c3 = compare_log_product(lambda * alpha / 4, alpha, p, rhs3) != std::strong_ordering::less;
  cert["conditions"].push_back(
      condition("(lambda/4) alpha log_p(alpha) >= log_p(M/sqrt s)", "(" + mpq_class(lambda * alpha / 4).get_str() + ") log_p(" + alpha.get_str() + ")", ">=",
                rhs3.get_str(), c3));
  if (!c2 || !c3) {
    std::string msg = "asymptotic conditions violated:";
    if (!c2) msg += " [condition 2: alpha = " + alpha.get_str() + " <= p^8]";
    if (!c3) msg += " [condition 3: (lambda/4) alpha log_p alpha < " + rhs3.get_str() + "]";
    throw PreconditionError(msg);
  }

  json records = low_records(c, lambda.get_str(), lambda.get_str());
  // Index range of both parts: i <= (1/lambda) log_p(1/sqrt s) = v_h / (2 lambda).
  mpz_class I_big;
  mpz_fdiv_q(I_big.get_mpz_t(), mpq_class(vh / (2 * lambda)).get_num_mpz_t(), mpq_class(vh / (2 * lambda)).get_den_mpz_t());
  const std::int64_t I = std::min<std::int64_t>(I_big.get_si(), pN - 1);

  std::vector<std::int64_t> idx;
  const bool exhaustive = I <= cfg.exhaustive_limit;
  if (!exhaustive) {
    std::set<std::int64_t> s;
    for (std::int64_t pj = 1; pj <= I; pj *= p) {
      for (std::int64_t d : {-1, 0, 1})
        if (pj + d >= 1 && pj + d <= I) s.insert(pj + d);
      if (pj > I / p) break;
    }
    s.insert(I);
    if (I > 1) s.insert(I - 1);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::int64_t> dist(1, I);
    for (int t = 0; t < cfg.samples; ++t) s.insert(dist(rng));
    idx.assign(s.begin(), s.end());
  }

  // Part 1: |1 - zeta^i| >= sqrt s, i.e. lambda p^{v_p(i)} <= v_h/2.
  {
    std::int64_t count = 0, worst = 1;
    bool holds = true;
    auto visit = [&](std::int64_t i) {
      ++count;
      if (vp(i, p) > vp(worst, p)) worst = i;
      if (v_one_minus_zeta_power(lambda, p, i) > vh / 2) holds = false;
    };
    if (exhaustive)
      for (std::int64_t i = 1; i <= I; ++i) visit(i);
    else
      for (auto i : idx) visit(i);
    records.push_back({{"kind", "part1"},
                       {"range", {1, I}},
                       {"exhaustive", exhaustive},
                       {"count", count},
                       {"worst_i", worst},
                       {"v", v_one_minus_zeta_power(lambda, p, worst).get_str()},
                       {"bound", mpq_class(vh / 2).get_str()},
                       {"holds", holds}});
    if (!holds) throw InequalityFailure(worst, "part 1 fails: |1 - zeta^i| < sqrt s at i = " + std::to_string(worst));
  }

  // Part 2: lambda + v_h - v(1 - q^{k-1}) - v(1 - q^k) >= v_h/2 for 1 < k <= I.
  {
    auto lhs = [&](std::int64_t k) {
      return mpq_class(lambda + vh - v_one_minus_zeta_power(lambda, p, k - 1) - v_one_minus_zeta_power(lambda, p, k));
    };
    std::int64_t count = 0, worst = -1;
    mpq_class worst_lhs;
    auto visit = [&](std::int64_t k) {
      if (k < 2) return;
      ++count;
      mpq_class l = lhs(k);
      if (worst < 0 || l < worst_lhs) {
        worst = k;
        worst_lhs = l;
      }
    };
    if (exhaustive)
      for (std::int64_t k = 2; k <= I; ++k) visit(k);
    else
      for (auto k : idx) visit(k);
    if (worst >= 0) {
      bool holds = worst_lhs >= vh / 2;
      records.push_back({{"kind", "middle-summary"},
                         {"range", {2, I}},
                         {"exhaustive", exhaustive},
                         {"count", count},
                         {"worst_k", worst},
                         {"lhs", worst_lhs.get_str()},
                         {"rhs", mpq_class(vh / 2).get_str()},
                         {"holds", holds}});
      if (!holds) throw InequalityFailure(worst, "middle range fails at k = " + std::to_string(worst) + ": " +
                                                     worst_lhs.get_str() + " < " + mpq_class(vh / 2).get_str());
      // Adversarial samples, stored individually.
      for (std::int64_t pj = p; pj <= I; pj *= p) {
        for (std::int64_t k : {pj, pj + 1})
          if (k >= 2 && k <= I)
            records.push_back({{"k", k}, {"kind", "middle"}, {"lhs", lhs(k).get_str()}, {"rhs", mpq_class(vh / 2).get_str()},
                               {"holds", lhs(k) >= vh / 2}});
        if (pj > I / p) break;
      }
    }
  }

  // Large k > I via m with alpha <= m < 2 alpha: |<zeta,q>_k| <= sqrt s |(zeta;zeta)_m|.
  {
    mpz_class m_big;
    mpz_cdiv_q(m_big.get_mpz_t(), alpha.get_num_mpz_t(), alpha.get_den_mpz_t());
    const std::int64_t m = m_big.get_si();
    bool m_ok = mpq_class(m_big) < 2 * alpha && m_big >= zpow(p, 8) && m < pN;
    if (!m_ok) throw PreconditionError("no integer m with alpha <= m < 2 alpha inside [p^8, p^N)");
    BetaValue b = beta(p, m);
    BoundCheck cor = check_corollary_bound(p, cfg.N, m);
    const mpq_class lb = lambda * mpq_class(mpz_class(static_cast<long>(b.value)));
    const bool holds = cor.holds && lb >= rhs3;
    records.push_back({{"kind", "large"},
                       {"m", m},
                       {"beta", b.value},
                       {"lambda_beta", lb.get_str()},
                       {"rhs", rhs3.get_str()},
                       {"corollary_holds", cor.holds},
                       {"holds", holds}});
    if (!holds) throw InequalityFailure(m, "large-k bound fails at m = " + std::to_string(m));
    // v(<zeta,q>_k) >= v_h/2 + lambda beta(m), so U_k <= M_log - v_h/2 - lambda beta(m).
    const mpq_class U = mlog - vh / 2 - lb;
    std::set<std::int64_t> ks{I + 1, pN - 1};
    for (std::int64_t pj = 1; pj < pN; pj *= p) {
      if (pj > I) ks.insert(pj);
      if (pj > pN / p) break;
    }
    for (auto k : ks)
      records.push_back({{"k", k}, {"kind", "large-sample"}, {"m", m}, {"U", U.get_str()}, {"holds", U < to_mpq(c.G)}});
  }
  for (const auto& r : records) ok = ok && r["holds"].get<bool>();
  cert["records"] = std::move(records);
  cert["tail"] = {{"cutoff", I},
                  {"rule", "k > cutoff: |<zeta,q>_k| <= |<zeta,q>_m| <= sqrt s |(zeta;zeta)_m| with the beta bound"},
                  {"holds", ok}};
  cert["valid"] = ok;
  return {std::move(cert)};
}

Certificate main_inequality(const MainIneqConfig& cfg) {
  return cfg.mode == MainIneqConfig::Mode::Exact ? main_inequality_exact(cfg) : main_inequality_asymptotic(cfg);
}

VerifyResult verify_certificate(const json& cert) {
  VerifyResult res;
  auto fail = [&](const std::string& what) {
    res.ok = false;
    res.problems.push_back(what);
  };
  auto expect = [&](bool cond, const std::string& what) {
    ++res.checked;
    if (!cond) fail(what);
  };
  try {
    if (cert.value("schema", "") != kCertificateSchema) {
      fail("unknown schema");
      return res;
    }
    const MainIneqConfig cfg = MainIneqConfig::from_json(cert.at("config"));
    const std::string mode = cert.at("mode").get<std::string>();
    const mpq_class lambda = lambda_of(cfg.p, cfg.N);
    const mpq_class vh = to_mpq(cfg.v_h), mlog = to_mpq(cfg.profile.m_log);
    expect(parse_mpq(cert.at("lambda")) == lambda, "lambda does not match p, N");
    expect(lambda < vh, "condition 1 (lambda < v_h) fails");
    expect(vh <= mpq_class(1, cfg.p - 1), "v_h > 1/(p-1)");
    auto verdict = classify(cfg.profile, -cfg.v_h);
    expect(verdict.kind == RegularityVerdict::Kind::Regular, "s is not regular for the profile");
    const Rational G = growth_modulus(cfg.profile, -cfg.v_h);
    expect(Rational::parse(cert.at("G").get<std::string>()) == G, "stored G differs from the profile");
    expect(G > Rational(0), "G(s) <= 1");
    const mpq_class Gq = to_mpq(G);
    for (const auto& c : cert.at("conditions")) expect(c.at("holds").get<bool>(), "condition '" + c.at("name").get<std::string>() + "' recorded as failing");

    const auto& recs = cert.at("records");
    bool saw0 = false, saw1 = false;
    std::int64_t next_k = 2;
    mpq_class prev_v = lambda, last_U;
    bool have_exact = false;
    for (const auto& r : recs) {
      const std::string kind = r.at("kind").get<std::string>();
      const bool stored = r.at("holds").get<bool>();
      bool holds = false;
      if (kind == "constant") {
        saw0 = true;
        holds = Gq > 0;
      } else if (kind == "linear") {
        saw1 = true;
        holds = parse_mpq(r.at("v_zeta_minus_1")) == lambda && parse_mpq(r.at("v_q_minus_1")) == lambda &&
                parse_mpq(r.at("U")) == Gq;
      } else if (kind == "exact") {
        const std::int64_t k = r.at("k").get<std::int64_t>();
        expect(k == next_k, "exact records are not contiguous at k = " + std::to_string(k));
        ++next_k;
        const mpq_class v = parse_mpq(r.at("v")), U = parse_mpq(r.at("U"));
        holds = U == mlog - v && U < Gq;
        expect(v >= prev_v, "valuations decrease at k = " + std::to_string(k));
        prev_v = v;
        last_U = U;
        have_exact = true;
        if (r.contains("v_ratio")) {
          const mpq_class formula = lambda + vh - v_one_minus_zeta_power(lambda, cfg.p, k - 1) -
                                    v_one_minus_zeta_power(lambda, cfg.p, k);
          holds = holds && parse_mpq(r.at("v_ratio")) == formula && parse_mpq(r.at("formula_ratio")) == formula &&
                  formula >= vh / 2 &&
                  parse_mpq(r.at("v_one_minus_q_k")) == v_one_minus_zeta_power(lambda, cfg.p, k);
        }
      } else if (kind == "part1") {
        const std::int64_t worst = r.at("worst_i").get<std::int64_t>();
        const std::int64_t I = r.at("range")[1].get<std::int64_t>();
        const mpq_class v = v_one_minus_zeta_power(lambda, cfg.p, worst);
        // The largest p-power <= I has the largest v_p in [1, I].
        std::int64_t pmax = 1;
        while (pmax <= I / cfg.p) pmax *= cfg.p;
        holds = parse_mpq(r.at("v")) == v && v_one_minus_zeta_power(lambda, cfg.p, pmax) <= vh / 2;
      } else if (kind == "middle-summary" || kind == "middle") {
        const std::int64_t k = r.value("worst_k", r.value("k", std::int64_t{0}));
        const mpq_class l = lambda + vh - v_one_minus_zeta_power(lambda, cfg.p, k - 1) - v_one_minus_zeta_power(lambda, cfg.p, k);
        holds = k >= 2 && parse_mpq(r.at("lhs")) == l && l >= vh / 2;
      } else if (kind == "large") {
        const std::int64_t m = r.at("m").get<std::int64_t>();
        BetaValue b = beta(cfg.p, m);
        const mpq_class lb = lambda * mpq_class(mpz_class(static_cast<long>(b.value)));
        const mpq_class alpha = vh / (4 * lambda);
        holds = b.value == r.at("beta").get<std::int64_t>() && lb >= mlog + vh / 2 && mpq_class(m) >= alpha &&
                mpq_class(m) < 2 * alpha && check_corollary_bound(cfg.p, cfg.N, m).holds;
      } else if (kind == "large-sample") {
        const std::int64_t m = r.at("m").get<std::int64_t>();
        const mpq_class lb = lambda * mpq_class(mpz_class(static_cast<long>(beta(cfg.p, m).value)));
        const mpq_class U = parse_mpq(r.at("U"));
        holds = U == mlog - vh / 2 - lb && U < Gq;
      } else {
        fail("unknown record kind '" + kind + "'");
        continue;
      }
      ++res.checked;
      if (holds != stored || !holds)
        fail("record " + kind + (r.contains("k") ? " k = " + std::to_string(r.at("k").get<std::int64_t>()) : "") +
             (holds ? " recomputes as passing but is stored as failing" : " fails on recomputation"));
    }
    expect(saw0 && saw1, "k = 0 and k = 1 records missing");
    if (mode == "exact") {
      const std::int64_t cutoff = cert.at("tail").at("cutoff").get<std::int64_t>();
      expect(have_exact && next_k - 1 == cutoff, "exact records do not reach the tail cutoff");
      expect(have_exact && last_U < Gq, "tail not closed: U at the cutoff is not below G");
    } else if (mode == "asymptotic") {
      const mpq_class alpha = vh / (4 * lambda);
      expect(alpha > mpq_class(zpow(cfg.p, 8)), "condition 2 fails");
      expect(compare_log_product(lambda * alpha / 4, alpha, cfg.p, mlog + vh / 2) != std::strong_ordering::less,
             "condition 3 fails");
    } else {
      fail("unknown mode '" + mode + "'");
    }
    expect(cert.at("valid").get<bool>() == res.ok, "stored validity flag disagrees");
  } catch (const std::exception& ex) {
    fail(std::string("malformed certificate: ") + ex.what());
  }
  return res;
}

}  // namespace cyclopadic
