#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclopadic/mahler.hpp"
#include "cyclopadic/rational.hpp"

namespace cyclopadic {

// Log-scale profile l_n = log_p ||C(x, n)|| for n = 0..L, with the global
// bound l_n <= m_log assumed for every n (stored or not).
struct NormProfile {
  int p = 2;
  Rational m_log;
  std::vector<Rational> ells;

  int last_index() const noexcept { return static_cast<int>(ells.size()) - 1; }

  // {p, M_log: "1/8", ells: ["0", "1/8", ...]}.
  static NormProfile from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct GrowthValue {
  Rational value;
  // Indices attaining the stored maximum.
  std::vector<int> argmax;
  // Upper bound of l_n + n log_r over n > L.
  Rational tail_bound;
  bool certified = false;
  // Smallest profile length L that would certify the stored maximum, or
  // nullopt when no L can (log_r = 0 with max < m_log).
  std::optional<int> required_last_index;
};

// max_n (l_n + n log_r) over stored n, with the tail certificate. Never throws
// for an uncertified tail; see growth_modulus for the throwing form.
GrowthValue growth_value(const NormProfile& profile, const Rational& log_r);

// log_p G(r). Throws InconclusiveTail (naming the L needed) when the tail
// bound could exceed the stored maximum; std::invalid_argument if log_r > 0.
Rational growth_modulus(const NormProfile& profile, const Rational& log_r);

struct RegularityVerdict {
  enum class Kind { Regular, Critical, Inconclusive };
  Kind kind = Kind::Inconclusive;
  int witness = -1;
  std::vector<int> ties;
  std::string reason;
};

std::string to_string(RegularityVerdict::Kind k);

// Requires log_r < 0.
RegularityVerdict classify(const NormProfile& profile, const Rational& log_r);

// Critical log-radii in (-inf, 0), ascending: the pairwise tie candidates
// (l_i - l_j)/(j - i) < 0 that classify as Critical.
std::vector<Rational> critical_values(const NormProfile& profile);

// max_n (w_n - v(a_n)) for a classical (q = 1) Mahler series, with weights
// w_n <= m_log past the stored range. Throws InconclusiveTail when the tail
// could exceed the stored maximum, InsufficientPrecision when a coefficient
// that is zero at precision could.
Rational weighted_norm(const CoeffSeries& series, const std::vector<Rational>& weights, const Rational& m_log);

}  // namespace cyclopadic
