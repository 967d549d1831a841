#include "cyclopadic/norms.hpp"

#include <algorithm>
#include <stdexcept>

#include "cyclopadic/errors.hpp"

namespace cyclopadic {

NormProfile NormProfile::from_json(const nlohmann::json& j) {
  auto rat = [](const nlohmann::json& v) {
    return v.is_string() ? Rational::parse(v.get<std::string>()) : Rational(v.get<std::int64_t>());
  };
  NormProfile prof;
  prof.p = j.at("p").get<int>();
  prof.m_log = rat(j.at("M_log"));
  for (const auto& e : j.at("ells")) prof.ells.push_back(rat(e));
  if (prof.ells.empty()) throw std::invalid_argument("profile: ells must be non-empty");
  for (const auto& e : prof.ells)
    if (e > prof.m_log) throw std::invalid_argument("profile: entry " + e.to_string() + " exceeds M_log");
  return prof;
}

nlohmann::json NormProfile::to_json() const {
  nlohmann::json j;
  j["p"] = p;
  j["M_log"] = m_log.to_string();
  j["ells"] = nlohmann::json::array();
  for (const auto& e : ells) j["ells"].push_back(e.to_string());
  return j;
}

GrowthValue growth_value(const NormProfile& profile, const Rational& log_r) {
  if (log_r > Rational(0)) throw std::invalid_argument("growth modulus needs log_r <= 0");
  if (profile.ells.empty()) throw std::invalid_argument("growth modulus of an empty profile");
  GrowthValue g;
  for (int n = 0; n <= profile.last_index(); ++n) {
    Rational v = profile.ells[static_cast<std::size_t>(n)] + Rational(n) * log_r;
    if (g.argmax.empty() || v > g.value) {
      g.value = v;
      g.argmax = {n};
    } else if (v == g.value) {
      g.argmax.push_back(n);
    }
  }
  const int L = profile.last_index();
  g.tail_bound = profile.m_log + Rational(L + 1) * log_r;
  g.certified = g.value >= g.tail_bound;
  if (g.certified) {
    g.required_last_index = L;
  } else if (log_r < Rational(0)) {
    // m_log + (L' + 1) log_r <= value.
    g.required_last_index = static_cast<int>(((g.value - profile.m_log) / log_r).ceil()) - 1;
  }
  return g;
}

Rational growth_modulus(const NormProfile& profile, const Rational& log_r) {
  GrowthValue g = growth_value(profile, log_r);
  if (!g.certified) {
    std::string need = g.required_last_index ? "profile up to n = " + std::to_string(*g.required_last_index)
                                             : "a smaller M_log (no length suffices at r = 1)";
    throw InconclusiveTail("growth modulus at log_r = " + log_r.to_string() + ": tail bound " +
                           g.tail_bound.to_string() + " exceeds stored maximum " + g.value.to_string() + "; needs " +
                           need);
  }
  return g.value;
}

std::string to_string(RegularityVerdict::Kind k) {
  switch (k) {
    case RegularityVerdict::Kind::Regular: return "regular";
    case RegularityVerdict::Kind::Critical: return "critical";
    case RegularityVerdict::Kind::Inconclusive: break;
  }
  return "inconclusive";
}

RegularityVerdict classify(const NormProfile& profile, const Rational& log_r) {
  if (log_r >= Rational(0)) throw std::invalid_argument("classify needs log_r < 0");
  GrowthValue g = growth_value(profile, log_r);
  RegularityVerdict r;
  if (g.argmax.size() >= 2 && g.certified) {
    r.kind = RegularityVerdict::Kind::Critical;
    r.ties = g.argmax;
  } else if (g.argmax.size() == 1 && g.value > g.tail_bound) {
    r.kind = RegularityVerdict::Kind::Regular;
    r.witness = g.argmax[0];
  } else {
    r.reason = "tail bound " + g.tail_bound.to_string() + " reaches stored maximum " + g.value.to_string();
    if (g.required_last_index) r.reason += "; extend the profile past n = " + std::to_string(*g.required_last_index);
  }
  return r;
}

std::vector<Rational> critical_values(const NormProfile& profile) {
  std::vector<Rational> cand;
  const int L = profile.last_index();
  for (int i = 0; i <= L; ++i)
    for (int j = i + 1; j <= L; ++j) {
      Rational t = (profile.ells[static_cast<std::size_t>(i)] - profile.ells[static_cast<std::size_t>(j)]) / Rational(j - i);
      if (t < Rational(0)) cand.push_back(t);
    }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  std::vector<Rational> out;
  for (const auto& t : cand)
    if (classify(profile, t).kind == RegularityVerdict::Kind::Critical) out.push_back(t);
  return out;
}

Rational weighted_norm(const CoeffSeries& series, const std::vector<Rational>& weights, const Rational& m_log) {
  if (!(series.q - CycloElement::one(series.q.field_ptr())).is_zero_at_precision())
    throw std::invalid_argument("weighted_norm: needs a classical (q = 1) Mahler series");
  if (weights.size() < series.coeffs.size()) throw std::invalid_argument("weighted_norm: fewer weights than coefficients");
  if (series.tail.kind == TailBound::Kind::Unknown) throw InconclusiveTail("weighted_norm: tail of the series is unknown");
  std::optional<Rational> best;
  // Upper bounds of terms whose coefficient is zero at precision.
  std::optional<Rational> undecided;
  for (std::size_t n = 0; n < series.coeffs.size(); ++n) {
    if (series.coeffs[n].is_exact_zero()) continue;
    Valuation v = series.coeffs[n].valuation();
    Rational t = weights[n] - v.lower_bound();
    if (v.is_finite()) best = best ? max(*best, t) : t;
    else undecided = undecided ? max(*undecided, t) : t;
  }
  if (!best) throw InsufficientPrecision("weighted_norm: no coefficient is nonzero at precision");
  if (undecided && *undecided > *best)
    throw InsufficientPrecision("weighted_norm: a coefficient that is zero at precision could reach " +
                                undecided->to_string());
  if (series.tail.kind == TailBound::Kind::Bound && m_log - series.tail.bound > *best)
    throw InconclusiveTail("weighted_norm: tail could reach " + (m_log - series.tail.bound).to_string() +
                           " above the stored maximum " + best->to_string());
  return *best;
}

}  // namespace cyclopadic
