#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclopadic/norms.hpp"
#include "cyclopadic/rational.hpp"

namespace cyclopadic {

inline constexpr const char* kCertificateSchema = "cyclopadic.certificate/1";
inline constexpr const char* kReportSchema = "cyclopadic.report/1";

// A configuration precondition does not hold; the message names it.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A record of the inequality chain failed; `k` is the offending index.
class InequalityFailure : public std::runtime_error {
 public:
  InequalityFailure(std::int64_t k, const std::string& what) : std::runtime_error(what), k_(k) {}
  std::int64_t k() const noexcept { return k_; }

 private:
  std::int64_t k_;
};

struct MainIneqConfig {
  enum class Mode { Exact, Asymptotic };
  int p = 2;
  int N = 6;
  // v(h); h = pi^{v_h e} inside K_N.
  Rational v_h;
  NormProfile profile;
  Mode mode = Mode::Exact;
  // Exact mode: relative precision of K_N (0 picks a default) and the last
  // k with an explicit record (0 means p^N).
  int precision = 0;
  std::int64_t k_cutoff = 0;
  // Asymptotic mode: exhaustive below this range size, sampled above.
  std::int64_t exhaustive_limit = 1000000;
  int samples = 2000;
  std::uint64_t seed = 1;

  nlohmann::json to_json() const;
  static MainIneqConfig from_json(const nlohmann::json& j);
};

// Certificate JSON:
//   {schema, mode, config, lambda, G, regular_witness,
//    conditions: [{name, lhs, relation, rhs, holds}],
//    records: [{k, kind, ...exact rationals..., holds}],
//    tail: {cutoff, rule, holds}, valid}
// Every verdict is recomputable from the stored rationals.
struct Certificate {
  nlohmann::json data;
  bool valid() const { return data.value("valid", false); }
};

Certificate main_inequality_exact(const MainIneqConfig& cfg);
Certificate main_inequality_asymptotic(const MainIneqConfig& cfg);
Certificate main_inequality(const MainIneqConfig& cfg);

struct VerifyResult {
  bool ok = true;
  std::size_t checked = 0;
  std::vector<std::string> problems;
};

// Recomputes every comparison of a certificate from its stored rationals
// (no extension-field arithmetic).
VerifyResult verify_certificate(const nlohmann::json& cert);

// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware).
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn, unsigned threads = 0);

struct Report {
  nlohmann::json data;
  bool all_pass() const { return data.value("all_pass", false); }
};

// Campaigns: beta-formula, beta-bound, cor-bound, qmahler-closed-form,
// fourier-suite, intertwine-suite, norm-growth. Unknown names and bad
// configuration values throw std::invalid_argument.
Report run_campaign(const std::string& name, const nlohmann::json& config = nlohmann::json::object());
std::vector<std::string> campaign_names();

}  // namespace cyclopadic
