#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "cyclopadic/valuation.hpp"

namespace cyclopadic {

// Element of Q_p as p^valuation * unit, the unit known modulo p^precision.
// Exact zero is the only element without a unit.
class PadicScalar {
 public:
  static PadicScalar zero(int p, int precision);
  static PadicScalar from_integer(int p, const mpz_class& n, int precision);
  static PadicScalar from_rational(int p, const mpq_class& q, int precision);

  // `unit` must be prime to p; it is reduced modulo p^precision.
  PadicScalar(int p, std::int64_t valuation, mpz_class unit, int precision);

  int prime() const noexcept { return p_; }
  int precision() const noexcept { return precision_; }
  bool is_zero() const noexcept { return zero_; }
  // Throws std::domain_error on exact zero.
  std::int64_t valuation() const;
  const mpz_class& unit() const noexcept { return unit_; }
  // Base-p digits of the unit, least significant first.
  std::vector<int> unit_digits() const;

  PadicScalar operator-() const;
  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b);
  PadicScalar inverse() const;

  // Equal as p-adic numbers up to the smaller absolute precision.
  bool equals_at_precision(const PadicScalar& o) const;

 private:
  PadicScalar() = default;

  int p_ = 2;
  bool zero_ = true;
  std::int64_t valuation_ = 0;
  mpz_class unit_;
  int precision_ = 0;
};

// v_p of a nonzero integer.
int padic_valuation(const mpz_class& n, int p);
// v_p of a nonzero rational.
int padic_valuation(const mpq_class& q, int p);
mpz_class ipow(int p, int k);

}  // namespace cyclopadic
