#include "cyclopadic/padic_scalar.hpp"

#include <algorithm>
#include <stdexcept>

#include "cyclopadic/errors.hpp"

namespace cyclopadic {

mpz_class ipow(int p, int k) {
  if (k < 0) throw std::domain_error("ipow: negative exponent");
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return r;
}

int padic_valuation(const mpz_class& n, int p) {
  if (n == 0) throw std::domain_error("padic_valuation of zero");
  mpz_class m = n;
  int v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

int padic_valuation(const mpq_class& q, int p) {
  return padic_valuation(q.get_num(), p) - padic_valuation(q.get_den(), p);
}

namespace {

mpz_class inverse_mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::domain_error("inverse_mod: not invertible");
  return r;
}

mpz_class reduce(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

}  // namespace

PadicScalar PadicScalar::zero(int p, int precision) {
  PadicScalar s;
  s.p_ = p;
  s.precision_ = precision;
  return s;
}

PadicScalar::PadicScalar(int p, std::int64_t valuation, mpz_class unit, int precision)
    : p_(p), zero_(false), valuation_(valuation), precision_(precision) {
  if (precision < 1) throw std::invalid_argument("PadicScalar: precision must be >= 1");
  unit_ = reduce(unit, ipow(p, precision));
  if (mpz_divisible_ui_p(unit_.get_mpz_t(), static_cast<unsigned long>(p)))
    throw std::invalid_argument("PadicScalar: unit must be prime to p");
}

PadicScalar PadicScalar::from_integer(int p, const mpz_class& n, int precision) {
  if (n == 0) return zero(p, precision);
  int v = padic_valuation(n, p);
  mpz_class u = n;
  mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), ipow(p, v).get_mpz_t());
  return PadicScalar(p, v, u, precision);
}

PadicScalar PadicScalar::from_rational(int p, const mpq_class& q, int precision) {
  if (q == 0) return zero(p, precision);
  int vn = padic_valuation(q.get_num(), p);
  int vd = padic_valuation(q.get_den(), p);
  mpz_class n = q.get_num(), d = q.get_den();
  mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), ipow(p, vn).get_mpz_t());
  mpz_divexact(d.get_mpz_t(), d.get_mpz_t(), ipow(p, vd).get_mpz_t());
  mpz_class mod = ipow(p, precision);
  return PadicScalar(p, vn - vd, reduce(n * inverse_mod(d, mod), mod), precision);
}

std::int64_t PadicScalar::valuation() const {
  if (zero_) throw std::domain_error("PadicScalar: valuation of exact zero");
  return valuation_;
}

std::vector<int> PadicScalar::unit_digits() const {
  std::vector<int> digits;
  if (zero_) return digits;
  mpz_class u = unit_;
  for (int i = 0; i < precision_; ++i) {
    digits.push_back(static_cast<int>(mpz_fdiv_q_ui(u.get_mpz_t(), u.get_mpz_t(), static_cast<unsigned long>(p_))));
  }
  return digits;
}

PadicScalar PadicScalar::operator-() const {
  if (zero_) return *this;
  return PadicScalar(p_, valuation_, -unit_, precision_);
}

PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
  if (a.p_ != b.p_) throw FieldMismatch("PadicScalar: different primes");
  if (a.zero_) return b;
  if (b.zero_) return a;
  std::int64_t v = std::min(a.valuation_, b.valuation_);
  std::int64_t abs_prec = std::min(a.valuation_ + a.precision_, b.valuation_ + b.precision_);
  int digits = static_cast<int>(abs_prec - v);
  if (digits <= 0) return PadicScalar::zero(a.p_, std::min(a.precision_, b.precision_));
  mpz_class mod = ipow(a.p_, digits);
  mpz_class sum = a.unit_ * ipow(a.p_, static_cast<int>(a.valuation_ - v)) +
                  b.unit_ * ipow(b.p_, static_cast<int>(b.valuation_ - v));
  sum = reduce(sum, mod);
  if (sum == 0) return PadicScalar::zero(a.p_, std::min(a.precision_, b.precision_));
  int extra = padic_valuation(sum, a.p_);
  mpz_divexact(sum.get_mpz_t(), sum.get_mpz_t(), ipow(a.p_, extra).get_mpz_t());
  return PadicScalar(a.p_, v + extra, sum, digits - extra);
}

PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }

PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
  if (a.p_ != b.p_) throw FieldMismatch("PadicScalar: different primes");
  int prec = std::min(a.precision_, b.precision_);
  if (a.zero_ || b.zero_) return PadicScalar::zero(a.p_, prec);
  return PadicScalar(a.p_, a.valuation_ + b.valuation_, a.unit_ * b.unit_, prec);
}

PadicScalar PadicScalar::inverse() const {
  if (zero_) throw std::domain_error("PadicScalar: inverse of zero");
  return PadicScalar(p_, -valuation_, inverse_mod(unit_, ipow(p_, precision_)), precision_);
}

bool PadicScalar::equals_at_precision(const PadicScalar& o) const {
  PadicScalar d = *this - o;
  return d.is_zero();
}

}  // namespace cyclopadic
