#include "cyclopadic/valuation.hpp"

#include "cyclopadic/errors.hpp"

namespace cyclopadic {

const Rational& Valuation::value() const {
  if (zero_) throw InsufficientPrecision("valuation of an element that is zero at precision " + v_.to_string());
  return v_;
}

Valuation operator+(const Valuation& a, const Valuation& b) {
  if (a.zero_ || b.zero_) return Valuation::zero_at_precision(a.v_ + b.v_);
  return Valuation::finite(a.v_ + b.v_);
}

Valuation operator+(const Valuation& a, const Rational& shift) { return Valuation(a.zero_, a.v_ + shift); }

std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
  if (!a.zero_ && !b.zero_) return a.v_ <=> b.v_;
  if (a.zero_ && b.zero_)
    throw InsufficientPrecision("comparing two valuations that are both zero at precision");
  // Exactly one side is only a lower bound.
  if (a.zero_) {
    if (a.v_ > b.v_) return std::strong_ordering::greater;
  } else {
    if (b.v_ > a.v_) return std::strong_ordering::less;
  }
  throw InsufficientPrecision("valuation comparison needs digits beyond precision");
}

bool operator==(const Valuation& a, const Valuation& b) { return (a <=> b) == 0; }

bool Valuation::at_least(const Rational& bound) const {
  if (!zero_) return v_ >= bound;
  if (v_ >= bound) return true;
  throw InsufficientPrecision("cannot decide v >= " + bound.to_string() + " from zero at precision " + v_.to_string());
}

std::string Valuation::to_string() const { return zero_ ? "inf" : v_.to_string(); }

Valuation min(const Valuation& a, const Valuation& b) {
  if (a.is_zero_at_precision() && b.is_zero_at_precision())
    return Valuation::zero_at_precision(min(a.lower_bound(), b.lower_bound()));
  if (a.is_zero_at_precision()) {
    if (a.lower_bound() > b.lower_bound()) return b;
    throw InsufficientPrecision("minimum of valuations needs digits beyond precision");
  }
  if (b.is_zero_at_precision()) {
    if (b.lower_bound() > a.lower_bound()) return a;
    throw InsufficientPrecision("minimum of valuations needs digits beyond precision");
  }
  return a.lower_bound() <= b.lower_bound() ? a : b;
}

}  // namespace cyclopadic
