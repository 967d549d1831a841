#pragma once

#include <compare>
#include <string>

#include "cyclopadic/rational.hpp"

namespace cyclopadic {

// Exact valuation of a p-adic quantity.
//
// An element whose known digits all vanish is never reported as zero: it is
// "zero at precision A", meaning only that its valuation is >= A. Ordering
// comparisons that cannot be decided from such a lower bound throw
// InsufficientPrecision.
class Valuation {
 public:
  static Valuation finite(Rational v) { return Valuation(false, v); }
  static Valuation zero_at_precision(Rational absolute_precision) { return Valuation(true, absolute_precision); }

  bool is_finite() const noexcept { return !zero_; }
  bool is_zero_at_precision() const noexcept { return zero_; }

  // The exact value; throws InsufficientPrecision for zero-at-precision.
  const Rational& value() const;
  // Exact value, or the precision bound when zero-at-precision.
  const Rational& lower_bound() const noexcept { return v_; }

  friend Valuation operator+(const Valuation& a, const Valuation& b);
  friend Valuation operator+(const Valuation& a, const Rational& shift);

  // Three-way compare. Throws InsufficientPrecision when undecidable.
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b);
  friend bool operator==(const Valuation& a, const Valuation& b);

  // Decides v >= bound, or throws when the lower bound is too weak.
  bool at_least(const Rational& bound) const;

  // "a/b" for finite values, "inf" for zero-at-precision.
  std::string to_string() const;

 private:
  Valuation(bool zero, Rational v) : zero_(zero), v_(v) {}

  bool zero_;
  Rational v_;
};

Valuation min(const Valuation& a, const Valuation& b);

}  // namespace cyclopadic
