#pragma once

#include <json.hpp>

#include "cyclopadic/cyclotomic.hpp"
#include "cyclopadic/valuation.hpp"

namespace cyclopadic {

// {p, N, P, abs_precision, coeffs: [[val, [digits...]], ...]}. Each pi^i
// coefficient is written as its p-adic valuation and the base-p digits of
// its unit part, least significant first; a coefficient that vanishes at
// precision is [null, []].
nlohmann::json element_to_json(const CycloElement& a);
CycloElement element_from_json(const nlohmann::json& j, const FieldPtr& field);

// "a/b" (or "a") for finite values, "inf" for zero-at-precision.
nlohmann::json valuation_to_json(const Valuation& v);

}  // namespace cyclopadic
