#pragma once

#include "cyclopadic/cyclotomic.hpp"
#include "cyclopadic/valuation.hpp"

namespace cyclopadic {

// Valuation of a computed as v_p(det M_A)/e, where M_A is the matrix of
// multiplication by A(pi) on Z_p[pi]/E(pi). Its determinant is the norm of
// A(pi), i.e. Res(E, A) up to sign. The matrix and E are rebuilt here with
// machine-word modular arithmetic, independently of CycloElement::operator*.
//
// Throws InsufficientPrecision when the elimination runs out of digits.
Valuation valuation_by_resultant(const CycloElement& a);

}  // namespace cyclopadic
