#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "cyclopadic/cyclotomic.hpp"
#include "cyclopadic/rational.hpp"

namespace cyclopadic {

// Polynomial in q with exact integer coefficients, lowest degree first.
// The zero polynomial has no coefficients.
class QPolynomial {
 public:
  QPolynomial() = default;
  explicit QPolynomial(std::vector<mpz_class> coeffs);
  static QPolynomial monomial(int degree, const mpz_class& c = 1);

  // -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<mpz_class>& coefficients() const noexcept { return c_; }
  mpz_class coefficient(int i) const;

  friend QPolynomial operator+(const QPolynomial& a, const QPolynomial& b);
  friend QPolynomial operator-(const QPolynomial& a, const QPolynomial& b);
  friend QPolynomial operator*(const QPolynomial& a, const QPolynomial& b);
  friend bool operator==(const QPolynomial& a, const QPolynomial& b) = default;

  // Multiplies by q^k.
  QPolynomial shifted(int k) const;

  mpz_class evaluate(const mpz_class& q) const;
  CycloElement evaluate(const CycloElement& q) const;

  std::string to_string() const;

 private:
  void trim();
  std::vector<mpz_class> c_;
};

// Gaussian binomial [n choose k]_q through the q-Pascal recursion
// [m+1, j]_q = [m, j-1]_q + q^j [m, j]_q. Zero when k > n.
QPolynomial q_binomial_poly(int n, int k);
// [n choose k]_q for k = 0..min(kmax, n) (kmax < 0 means all), one pass.
std::vector<QPolynomial> q_binomial_row(int n, int kmax = -1);
// (q;q)_n = prod_{i=1}^n (1 - q^i) as a polynomial.
QPolynomial q_pochhammer_poly(int n);

// prod_{i<n} (1 - a q^i).
CycloElement q_pochhammer(const CycloElement& a, const CycloElement& q, std::int64_t n);
// <zeta, q>_k = prod_{i<k} (zeta - q^i).
CycloElement zq_coefficient(const CycloElement& zeta, const CycloElement& q, std::int64_t k);

struct BetaValue {
  std::int64_t n;
  int p;
  std::int64_t value;
};

// beta_p(n) = sum_k p^k (floor(n/p^k) - floor(n/p^{k+1})), n >= 1.
BetaValue beta(int p, std::int64_t n);

// lambda * beta_p(n) with lambda = 1/(p^{N-1}(p-1)); requires 1 <= n < p^N.
Rational poch_valuation_formula(int p, int N, std::int64_t n);

// Certified sign of coef * log_p(x) - rhs for x > 0, via MPFR interval
// evaluation with increasing precision. Exact when x is a power of p.
std::strong_ordering compare_log_product(const mpq_class& coef, const mpq_class& x, int p, const mpq_class& rhs);

struct BoundCheck {
  bool holds = false;
  // Nearest double below the exact slack (lhs - rhs).
  double slack = 0;
  // Bound value as a double, for reporting.
  double bound = 0;
  std::int64_t beta = 0;
};

// beta_p(n) >= n log_p(n) (p-1)/p - n p/(p-1).
BoundCheck check_beta_lower_bound(int p, std::int64_t n);

// beta_p(n) >= n log_p(n) / 4, for p^8 <= n < p^N; throws std::out_of_range
// outside that window.
BoundCheck check_corollary_bound(int p, int N, std::int64_t n);

}  // namespace cyclopadic
