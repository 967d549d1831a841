#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <json.hpp>

#include "cyclopadic/cyclotomic.hpp"
#include "cyclopadic/errors.hpp"
#include "cyclopadic/harness.hpp"
#include "cyclopadic/json_io.hpp"
#include "cyclopadic/mahler.hpp"
#include "cyclopadic/norms.hpp"
#include "cyclopadic/qcalc.hpp"
#include "cyclopadic/schwartz.hpp"
#include "expr.hpp"

using namespace cyclopadic;
using json = nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return json::parse(in);
}

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << j.dump(2) << "\n";
}

int report_exit(const Report& r, const std::string& out) {
  write_json(r.data, out);
  std::cerr << r.data["campaign"].get<std::string>() << ": " << r.data["passed"] << " passed, " << r.data["failed"]
            << " failed\n";
  return r.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cyclopadic: exact cyclotomic p-adic arithmetic, q-Mahler expansions and norm certificates"};
  app.require_subcommand(1);
  int exit_code = 0;

  // qcalc ------------------------------------------------------------------
  auto* qcalc = app.add_subcommand("qcalc", "beta_p(n) and (zeta;zeta)_n valuations");
  qcalc->require_subcommand(1);
  struct {
    int p = 2, N = 3;
    std::int64_t n = 1, from = 0;
    bool check_bound = false, verify_exact = false;
    int precision = 64;
  } qo;
  auto* qbeta = qcalc->add_subcommand("beta", "beta_p(n) with the lower bound; TSV n, beta, bound, slack, verdict");
  qbeta->add_option("-p,--p", qo.p, "prime")->required();
  qbeta->add_option("-n,--n", qo.n, "last n")->required();
  qbeta->add_option("--from", qo.from, "first n (default: only n itself)");
  qbeta->add_flag("--check-bound", qo.check_bound, "check beta_p(n) >= n log_p(n)(p-1)/p - np/(p-1)");
  qbeta->callback([&] {
    std::int64_t first = qo.from > 0 ? qo.from : qo.n;
    std::int64_t fails = 0;
    std::cout << "n\tbeta\tbound\tslack\tverdict\n";
    for (std::int64_t n = first; n <= qo.n; ++n) {
      if (qo.check_bound) {
        BoundCheck b = check_beta_lower_bound(qo.p, n);
        if (!b.holds) ++fails;
        std::cout << n << '\t' << b.beta << '\t' << b.bound << '\t' << b.slack << '\t' << (b.holds ? "ok" : "FAIL") << '\n';
      } else {
        std::cout << n << '\t' << beta(qo.p, n).value << "\t-\t-\t-\n";
      }
    }
    exit_code = fails ? 1 : 0;
  });
  auto* qpoch = qcalc->add_subcommand("poch-val", "v((zeta;zeta)_n) = lambda beta_p(n) for 1 <= n < p^N");
  qpoch->add_option("-p,--p", qo.p, "prime")->required();
  qpoch->add_option("-N,--N", qo.N, "level")->required();
  qpoch->add_flag("--verify-exact", qo.verify_exact, "compare with the product computed in K_N");
  qpoch->add_option("--precision", qo.precision, "relative precision of K_N");
  qpoch->callback([&] {
    std::int64_t top = 1;
    for (int i = 0; i < qo.N; ++i) top *= qo.p;
    std::cout << "n\tbeta\tformula" << (qo.verify_exact ? "\texact\tverdict" : "") << '\n';
    FieldPtr F;
    std::optional<CycloElement> prod, zi;
    if (qo.verify_exact) {
      F = make_field(qo.p, qo.N, qo.precision);
      prod = zi = CycloElement::one(F);
    }
    std::int64_t fails = 0;
    for (std::int64_t n = 1; n < top; ++n) {
      Rational formula = poch_valuation_formula(qo.p, qo.N, n);
      std::cout << n << '\t' << beta(qo.p, n).value << '\t' << formula;
      if (qo.verify_exact) {
        zi = *zi * CycloElement::zeta(F);
        prod = *prod * (CycloElement::one(F) - *zi);
        Rational v = prod->valuation().value();
        if (v != formula) ++fails;
        std::cout << '\t' << v << '\t' << (v == formula ? "ok" : "FAIL");
      }
      std::cout << '\n';
    }
    exit_code = fails ? 1 : 0;
  });

  // mahler -----------------------------------------------------------------
  auto* mahler = app.add_subcommand("mahler", "q-Mahler expansions");
  mahler->require_subcommand(1);
  struct {
    int p = 2, N = 3, precision = 128;
    std::string q = "1", f = "zeta^x";
    std::int64_t K = 20;
    bool json_out = false;
  } mo;
  auto* qexp = mahler->add_subcommand("qexpand", "coefficients a_0..a_K of f in the q-Mahler basis");
  qexp->add_option("-p,--p", mo.p, "prime")->required();
  qexp->add_option("-N,--N", mo.N, "level")->required();
  qexp->add_option("--q", mo.q, "q as an expression in zeta and pi, e.g. \"zeta+pi^2\"");
  qexp->add_option("--f", mo.f, "sum of c*b^x terms, e.g. \"zeta^x\"");
  qexp->add_option("-K,--K", mo.K, "last coefficient index");
  qexp->add_option("--precision", mo.precision, "relative precision of K_N");
  qexp->add_flag("--json", mo.json_out, "JSON output");
  qexp->callback([&] {
    auto F = make_field(mo.p, mo.N, mo.precision);
    CycloElement q = cli::parse_element(mo.q, F);
    CoeffSeries s = q_mahler_coeffs(cli::parse_function(mo.f, F), q, mo.K);
    if (mo.json_out) {
      json j;
      j["q"] = element_to_json(q);
      j["coeffs"] = json::array();
      for (std::size_t k = 0; k < s.coeffs.size(); ++k)
        j["coeffs"].push_back({{"k", k}, {"value", element_to_json(s.coeffs[k])}, {"valuation", valuation_to_json(s.coeffs[k].valuation())}});
      j["tail"] = s.tail.kind == TailBound::Kind::Zero    ? json("zero")
                  : s.tail.kind == TailBound::Kind::Bound ? json(s.tail.bound.to_string())
                                                          : json(nullptr);
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << "k\tvaluation\tvalue\n";
      for (std::size_t k = 0; k < s.coeffs.size(); ++k)
        std::cout << k << '\t' << s.coeffs[k].valuation().to_string() << '\t' << s.coeffs[k].to_string() << '\n';
    }
  });

  // fourier ----------------------------------------------------------------
  struct {
    int p = 2, N = 6, n_max = 6, precision = 32;
    std::string demo = "phi-n";
    bool tables = false;
  } fo;
  auto* fourier_cmd = app.add_subcommand("fourier", "Fourier transform demos");
  fourier_cmd->add_option("-p,--p", fo.p, "prime");
  fourier_cmd->add_option("-N,--N", fo.N, "level of the working field");
  fourier_cmd->add_option("--demo", fo.demo, "phi-n (F of 1_{p^-n Z_p}) or f-n (F of 1_{p^n Z_p})")
      ->check(CLI::IsMember({"phi-n", "f-n"}));
  fourier_cmd->add_option("--n-max", fo.n_max, "largest n");
  fourier_cmd->add_flag("--tables", fo.tables, "include the function tables");
  fourier_cmd->callback([&] {
    auto F = make_field(fo.p, fo.N, fo.precision);
    AdditiveCharacter psi{fo.p, 1};
    json out = json::array();
    for (int n = 0; n <= fo.n_max; ++n) {
      auto f = indicator(F, 1, fo.demo == "phi-n" ? -n : n);
      auto img = fourier(f, psi);
      json row = {{"n", n},
                  {"support_exponent", img.support_exponent()},
                  {"level_exponent", img.level_exponent()},
                  {"sup_norm_valuation", sup_norm(img).to_string()},
                  {"value_at_0", img({mpq_class(0)}).to_string()}};
      if (fo.tables) {
        row["input"] = f.to_json();
        row["output"] = img.to_json();
      }
      out.push_back(row);
    }
    std::cout << out.dump(2) << '\n';
  });

  // heisenberg -------------------------------------------------------------
  auto* heis = app.add_subcommand("heisenberg", "Schrodinger representation checks");
  heis->require_subcommand(1);
  struct {
    std::string g;
    int trials = 50, p = 2, N = 8;
    std::uint64_t seed = 7;
    std::string out;
  } ho;
  auto* chk = heis->add_subcommand("check-intertwine", "rho(h) T_g f == T_g rho(h g) f on random (h, f)");
  chk->add_option("--g", ho.g, "symplectic matrix \"a,b;c,d\" (random when omitted)");
  chk->add_option("--trials", ho.trials, "number of trials");
  chk->add_option("--seed", ho.seed, "seed");
  chk->add_option("-p,--p", ho.p, "prime");
  chk->add_option("-N,--N", ho.N, "level of the working field");
  chk->add_option("-o,--out", ho.out, "report path (default stdout)");
  chk->callback([&] {
    json cfg = {{"p", ho.p}, {"N", ho.N}, {"trials", ho.trials}, {"seed", ho.seed}, {"g", ho.g}};
    exit_code = report_exit(run_campaign("intertwine-suite", cfg), ho.out);
  });

  // norms ------------------------------------------------------------------
  auto* norms = app.add_subcommand("norms", "growth modulus of a norm profile");
  norms->require_subcommand(1);
  struct {
    std::string profile, log_r;
  } no;
  auto* growth = norms->add_subcommand("growth", "G(r) and the regularity verdict at log_p r");
  growth->add_option("--profile", no.profile, "profile JSON {p, M_log, ells}")->required();
  growth->add_option("--log-r", no.log_r, "log_p r, a rational <= 0")->required();
  growth->callback([&] {
    auto prof = NormProfile::from_json(read_json(no.profile));
    Rational t = Rational::parse(no.log_r);
    GrowthValue g = growth_value(prof, t);
    json j = {{"log_r", t.to_string()},
              {"G", g.value.to_string()},
              {"argmax", g.argmax},
              {"tail_bound", g.tail_bound.to_string()},
              {"certified", g.certified}};
    if (g.required_last_index) j["required_last_index"] = *g.required_last_index;
    if (t < Rational(0)) {
      auto v = classify(prof, t);
      j["verdict"] = to_string(v.kind);
      if (v.kind == RegularityVerdict::Kind::Regular) j["witness"] = v.witness;
      if (v.kind == RegularityVerdict::Kind::Critical) j["ties"] = v.ties;
      if (!v.reason.empty()) j["reason"] = v.reason;
    }
    std::cout << j.dump(2) << '\n';
    exit_code = g.certified ? 0 : 1;
  });
  auto* crit = norms->add_subcommand("critical", "critical log-radii of a profile");
  crit->add_option("--profile", no.profile, "profile JSON {p, M_log, ells}")->required();
  crit->callback([&] {
    auto prof = NormProfile::from_json(read_json(no.profile));
    json j = json::array();
    for (const auto& t : critical_values(prof)) j.push_back(t.to_string());
    std::cout << json{{"critical_log_r", j}}.dump(2) << '\n';
  });

  // verify -----------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "certificates and formula checks");
  verify->require_subcommand(1);
  struct {
    std::string mode = "exact", vh, mlog, profile, ells, out;
    int p = 2, N = 6, precision = 0, samples = 2000;
    std::int64_t k_cutoff = 0;
    std::uint64_t seed = 1;
  } vo;
  auto* mi = verify->add_subcommand("main-inequality", "certify the main inequality chain");
  mi->add_option("--mode", vo.mode, "exact or asymptotic")->check(CLI::IsMember({"exact", "asymptotic"}));
  mi->add_option("-p,--p", vo.p, "prime")->required();
  mi->add_option("-N,--N", vo.N, "level")->required();
  mi->add_option("--vh", vo.vh, "v(h), rational")->required();
  mi->add_option("--Mlog", vo.mlog, "log_p M (overrides the profile's M_log)");
  mi->add_option("--profile", vo.profile, "profile JSON {p, M_log, ells}");
  mi->add_option("--ells", vo.ells, "comma-separated profile entries, instead of --profile");
  mi->add_option("--precision", vo.precision, "exact mode: relative precision of K_N");
  mi->add_option("--k-cutoff", vo.k_cutoff, "exact mode: last explicit k (default p^N)");
  mi->add_option("--samples", vo.samples, "asymptotic mode: random samples per range");
  mi->add_option("--seed", vo.seed, "asymptotic mode: sampling seed");
  mi->add_option("-o,--out", vo.out, "certificate path (default stdout)");
  mi->callback([&] {
    MainIneqConfig c;
    c.p = vo.p;
    c.N = vo.N;
    c.v_h = Rational::parse(vo.vh);
    if (!vo.profile.empty()) {
      c.profile = NormProfile::from_json(read_json(vo.profile));
    } else if (!vo.ells.empty()) {
      c.profile.p = vo.p;
      std::stringstream ss(vo.ells);
      std::string item;
      while (std::getline(ss, item, ',')) c.profile.ells.push_back(Rational::parse(item));
    } else {
      throw CLI::ValidationError("main-inequality", "--profile or --ells is required");
    }
    if (!vo.mlog.empty()) c.profile.m_log = Rational::parse(vo.mlog);
    else if (vo.profile.empty()) throw CLI::ValidationError("main-inequality", "--Mlog is required with --ells");
    c.mode = vo.mode == "exact" ? MainIneqConfig::Mode::Exact : MainIneqConfig::Mode::Asymptotic;
    c.precision = vo.precision;
    c.k_cutoff = vo.k_cutoff;
    c.samples = vo.samples;
    c.seed = vo.seed;
    try {
      Certificate cert = main_inequality(c);
      write_json(cert.data, vo.out);
      std::cerr << "certificate " << (cert.valid() ? "valid" : "INVALID") << " (" << cert.data["records"].size()
                << " records)\n";
      exit_code = cert.valid() ? 0 : 1;
    } catch (const InequalityFailure& e) {
      std::cerr << "FAIL at k = " << e.k() << ": " << e.what() << '\n';
      exit_code = 1;
    }
  });
  auto* vb = verify->add_subcommand("beta-formula", "v((zeta;zeta)_n) against lambda beta_p(n) for all n < p^M, M <= N");
  vb->add_option("-p,--p", vo.p, "prime")->required();
  vb->add_option("-N,--N", vo.N, "largest level")->required();
  vb->add_option("-o,--out", vo.out, "report path (default stdout)");
  vb->callback([&] {
    exit_code = report_exit(run_campaign("beta-formula", {{"primes", {vo.p}}, {"max_N", vo.N}}), vo.out);
  });

  std::string cert_path;
  auto* vc = app.add_subcommand("verify-certificate", "recheck a certificate from its stored rationals");
  vc->add_option("certificate", cert_path, "certificate JSON")->required();
  vc->callback([&] {
    VerifyResult r = verify_certificate(read_json(cert_path));
    std::cout << json{{"ok", r.ok}, {"checked", r.checked}, {"problems", r.problems}}.dump(2) << '\n';
    exit_code = r.ok ? 0 : 1;
  });

  // campaign ---------------------------------------------------------------
  struct {
    std::string name, config, out;
    std::vector<std::string> set;
  } co;
  auto* camp = app.add_subcommand("campaign", "run a verification campaign");
  camp->add_option("name", co.name, "campaign name")->required()->check(CLI::IsMember(campaign_names()));
  camp->add_option("--config", co.config, "config JSON file");
  camp->add_option("--set", co.set, "key=value overrides (value parsed as JSON when possible)");
  camp->add_option("-o,--out", co.out, "report path (default stdout)");
  camp->callback([&] {
    json cfg = co.config.empty() ? json::object() : read_json(co.config);
    for (const auto& kv : co.set) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected key=value, got " + kv);
      std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      json parsed = json::parse(val, nullptr, false);
      cfg[key] = parsed.is_discarded() ? json(val) : parsed;
    }
    auto t0 = std::chrono::steady_clock::now();
    Report r = run_campaign(co.name, cfg);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "elapsed " << ms << " ms\n";
    exit_code = report_exit(r, co.out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return exit_code;
}
