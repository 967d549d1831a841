#include "cyclopadic/json_io.hpp"

#include <stdexcept>
#include <vector>

namespace cyclopadic {

nlohmann::json element_to_json(const CycloElement& a) {
  const CyclotomicField& F = a.field();
  nlohmann::json coeffs = nlohmann::json::array();
  for (int i = 0; i < F.degree(); ++i) {
    const auto& c = a.coefficients()[static_cast<std::size_t>(i)];
    if (a.is_zero_at_precision() || c == 0) {
      coeffs.push_back(nlohmann::json::array({nullptr, nlohmann::json::array()}));
      continue;
    }
    PadicScalar s = a.coefficient(i);
    coeffs.push_back(nlohmann::json::array({s.valuation(), s.unit_digits()}));
  }
  nlohmann::json j;
  j["p"] = F.prime();
  j["N"] = F.level();
  j["P"] = F.precision();
  j["abs_precision"] = a.is_exact_zero() ? nlohmann::json(nullptr) : nlohmann::json(a.absolute_precision());
  j["coeffs"] = std::move(coeffs);
  return j;
}

CycloElement element_from_json(const nlohmann::json& j, const FieldPtr& field) {
  if (j.at("p").get<int>() != field->prime() || j.at("N").get<int>() != field->level())
    throw std::invalid_argument("element_from_json: field parameters do not match");
  const auto& coeffs = j.at("coeffs");
  if (coeffs.size() != static_cast<std::size_t>(field->degree()))
    throw std::invalid_argument("element_from_json: expected " + std::to_string(field->degree()) + " coefficients");
  if (j.at("abs_precision").is_null()) return CycloElement::zero(field);
  const auto abs_prec = j.at("abs_precision").get<std::int64_t>();

  // Rebuild as p^s * sum c_i pi^i with s the smallest coefficient valuation.
  std::int64_t s = abs_prec;
  for (const auto& c : coeffs)
    if (!c.at(0).is_null()) s = std::min(s, c.at(0).get<std::int64_t>());
  std::vector<mpz_class> ints(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const auto& c = coeffs[i];
    if (c.at(0).is_null()) continue;
    mpz_class u = 0;
    const auto digits = c.at(1).get<std::vector<int>>();
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) u = u * field->prime() + *it;
    ints[i] = u * ipow(field->prime(), static_cast<int>(c.at(0).get<std::int64_t>() - s));
  }
  return CycloElement::from_pi_basis(field, ints, s).truncated(abs_prec);
}

nlohmann::json valuation_to_json(const Valuation& v) { return v.to_string(); }

}  // namespace cyclopadic
