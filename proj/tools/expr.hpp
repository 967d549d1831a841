#pragma once

#include <string>

#include "cyclopadic/cyclotomic.hpp"
#include "cyclopadic/mahler.hpp"

namespace cyclopadic::cli {

// Field element from an expression over integers, zeta, pi, + - * ^ and
// parentheses, e.g. "zeta+pi^2", "3*zeta^2 - 1".
CycloElement parse_element(const std::string& text, const FieldPtr& field);

// Sum of terms c*b^x (or b^x, or a constant), e.g. "zeta^x", "2*(1+pi)^x - zeta^x".
FunctionModel parse_function(const std::string& text, const FieldPtr& field);

}  // namespace cyclopadic::cli
