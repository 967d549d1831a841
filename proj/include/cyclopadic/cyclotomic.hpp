#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cyclopadic/padic_scalar.hpp"
#include "cyclopadic/rational.hpp"
#include "cyclopadic/valuation.hpp"

namespace cyclopadic {

inline constexpr int kDefaultPrecision = 64;
inline constexpr int kMaxPrecision = 4096;
inline constexpr int kMaxDegree = 1 << 12;

bool is_prime(std::int64_t n);

// K_N = Q_p(zeta) with zeta a primitive p^N-th root of unity, presented as
// Q_p[pi]/E(pi) with pi = zeta - 1 and E(T) = Phi_{p^N}(T + 1) Eisenstein.
class CyclotomicField {
 public:
  // Throws std::invalid_argument for non-prime p or N < 1, and
  // std::out_of_range when precision or degree exceed the configured maxima.
  static std::shared_ptr<const CyclotomicField> make(int p, int N, int precision = kDefaultPrecision);

  int prime() const noexcept { return p_; }
  int level() const noexcept { return N_; }
  // Ramification degree e = p^{N-1}(p-1).
  int degree() const noexcept { return e_; }
  // Digits of p carried by every coefficient.
  int precision() const noexcept { return precision_; }
  // lambda = v(pi) = 1/e.
  Rational lambda() const { return Rational(1, e_); }
  // p^N, the order of zeta.
  std::int64_t root_order() const noexcept { return order_; }

  // E_0..E_e as exact integers (E_e = 1).
  const std::vector<mpz_class>& eisenstein() const noexcept { return eisenstein_; }
  // -E_i mod p^precision for i < e, so pi^e = sum fold[i] pi^i.
  const std::vector<mpz_class>& fold() const noexcept { return fold_; }
  const mpz_class& power_of_p(int k) const { return p_powers_.at(static_cast<std::size_t>(k)); }

  bool compatible(const CyclotomicField& o) const noexcept {
    return p_ == o.p_ && N_ == o.N_ && precision_ == o.precision_;
  }
  std::string describe() const;

 private:
  CyclotomicField(int p, int N, int precision);

  int p_;
  int N_;
  int e_;
  int precision_;
  std::int64_t order_;
  std::vector<mpz_class> eisenstein_;
  std::vector<mpz_class> fold_;
  std::vector<mpz_class> p_powers_;
};

using FieldPtr = std::shared_ptr<const CyclotomicField>;

inline FieldPtr make_field(int p, int N, int precision = kDefaultPrecision) {
  return CyclotomicField::make(p, N, precision);
}

// Element p^shift * sum_{i<e} c_i pi^i of K_N, with the c_i known modulo
// p^relative_precision. Normalized so that some c_i is prime to p, unless
// the element is zero at precision (relative precision 0, all c_i = 0).
//
// Values are immutable; all arithmetic returns new elements.
class CycloElement {
 public:
  static CycloElement zero(FieldPtr field);
  static CycloElement one(FieldPtr field);
  static CycloElement integer(FieldPtr field, const mpz_class& n);
  static CycloElement rational(FieldPtr field, const mpq_class& q);
  static CycloElement zeta(FieldPtr field);
  static CycloElement pi(FieldPtr field);
  // zeta^k for any integer k (reduced modulo p^N).
  static CycloElement zeta_power(FieldPtr field, std::int64_t k);
  // sum a_j zeta^j.
  static CycloElement from_zeta_basis(FieldPtr field, std::span<const mpq_class> coeffs);
  // p^shift * sum coeffs[i] pi^i with the coefficients exact integers
  // (reduced modulo p^precision).
  static CycloElement from_pi_basis(FieldPtr field, std::span<const mpz_class> coeffs, std::int64_t shift = 0);

  const CyclotomicField& field() const noexcept { return *field_; }
  const FieldPtr& field_ptr() const noexcept { return field_; }
  std::int64_t shift() const noexcept { return shift_; }
  int relative_precision() const noexcept { return rel_; }
  // The element is known modulo p^absolute_precision.
  std::int64_t absolute_precision() const noexcept { return shift_ + rel_; }
  // Integral part c_0..c_{e-1} (the element divided by p^shift).
  const std::vector<mpz_class>& coefficients() const noexcept { return c_; }
  // Coefficient of pi^i as a Q_p scalar, p^shift folded in.
  PadicScalar coefficient(int i) const;

  bool is_zero_at_precision() const noexcept { return rel_ == 0; }
  Valuation valuation() const;

  CycloElement operator-() const;
  friend CycloElement operator+(const CycloElement& a, const CycloElement& b);
  friend CycloElement operator-(const CycloElement& a, const CycloElement& b);
  friend CycloElement operator*(const CycloElement& a, const CycloElement& b);
  CycloElement& operator+=(const CycloElement& o) { return *this = *this + o; }
  CycloElement& operator-=(const CycloElement& o) { return *this = *this - o; }
  CycloElement& operator*=(const CycloElement& o) { return *this = *this * o; }

  // Multiplies by p^k (exact, any sign of k).
  CycloElement scaled_by_p(std::int64_t k) const;
  // Multiplies by zeta = 1 + pi in O(e).
  CycloElement times_zeta() const;

  // Throws InsufficientPrecision when zero at precision.
  CycloElement inverse() const;
  CycloElement pow(std::int64_t n) const;

  // this - o is zero at precision.
  bool equals_at_precision(const CycloElement& o) const;

  // Forgets every digit at or beyond p^absolute.
  CycloElement truncated(std::int64_t absolute) const;
  // Exact zero: absolute precision kExactShift, never degrades a sum.
  bool is_exact_zero() const noexcept { return rel_ == 0 && shift_ >= kExactShift; }

  static constexpr std::int64_t kExactShift = std::int64_t{1} << 40;

  std::string to_string() const;

 private:
  CycloElement(FieldPtr field, std::int64_t shift, int rel, std::vector<mpz_class> c);
  void normalize();
  CycloElement unit_inverse() const;
  CycloElement times_pi_power(int j) const;

  FieldPtr field_;
  std::int64_t shift_ = 0;
  int rel_ = 0;
  std::vector<mpz_class> c_;
};

inline CycloElement invert(const CycloElement& a) { return a.inverse(); }
inline Valuation valuation(const CycloElement& a) { return a.valuation(); }

// Image of a in K_{N'} under zeta_{p^N} -> zeta_{p^N'}^{p^{N'-N}}.
// Throws std::invalid_argument when N' < N.
CycloElement embed_up(const CycloElement& a, const FieldPtr& target);

// Field of the operands after checking they agree; throws FieldMismatch.
const FieldPtr& common_field(const CycloElement& a, const CycloElement& b);

}  // namespace cyclopadic
