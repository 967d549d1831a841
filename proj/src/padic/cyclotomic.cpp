#include "cyclopadic/cyclotomic.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "cyclopadic/errors.hpp"

namespace cyclopadic {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

void reduce_into(mpz_class& x, const mpz_class& m) { mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()); }

std::int64_t clamp_shift(std::int64_t s) { return std::min(s, CycloElement::kExactShift); }

}  // namespace

// ---------------------------------------------------------------------------
// CyclotomicField

CyclotomicField::CyclotomicField(int p, int N, int precision) : p_(p), N_(N), precision_(precision) {
  std::int64_t ppow = 1;
  for (int i = 0; i < N - 1; ++i) ppow *= p;
  e_ = static_cast<int>(ppow * (p - 1));
  order_ = ppow * p;

  // Phi_{p^N}(X) = sum_{j<p} X^{j p^{N-1}}, so the coefficient of T^i in
  // Phi_{p^N}(T + 1) is sum_j binom(j p^{N-1}, i).
  eisenstein_.assign(static_cast<std::size_t>(e_) + 1, mpz_class(0));
  for (int j = 0; j < p; ++j) {
    auto top = static_cast<unsigned long>(j * ppow);
    for (unsigned long i = 0; i <= top; ++i) {
      mpz_class b;
      mpz_bin_uiui(b.get_mpz_t(), top, i);
      eisenstein_[i] += b;
    }
  }

  p_powers_.reserve(static_cast<std::size_t>(precision) + 1);
  p_powers_.emplace_back(1);
  for (int k = 1; k <= precision; ++k) p_powers_.push_back(p_powers_.back() * p);

  fold_.resize(static_cast<std::size_t>(e_));
  for (int i = 0; i < e_; ++i) {
    fold_[i] = -eisenstein_[i];
    reduce_into(fold_[i], p_powers_.back());
  }
}

std::shared_ptr<const CyclotomicField> CyclotomicField::make(int p, int N, int precision) {
  if (!is_prime(p)) throw std::invalid_argument("make_field: p = " + std::to_string(p) + " is not prime");
  if (N < 1) throw std::invalid_argument("make_field: N must be >= 1");
  if (precision < 1) throw std::invalid_argument("make_field: precision must be >= 1");
  if (precision > kMaxPrecision)
    throw std::out_of_range("make_field: precision " + std::to_string(precision) + " exceeds maximum " +
                            std::to_string(kMaxPrecision));
  std::int64_t e = p - 1;
  for (int i = 1; i < N; ++i) {
    e *= p;
    if (e > kMaxDegree) break;
  }
  if (e > kMaxDegree)
    throw std::out_of_range("make_field: degree p^(N-1)(p-1) exceeds maximum " + std::to_string(kMaxDegree));
  return std::shared_ptr<const CyclotomicField>(new CyclotomicField(p, N, precision));
}

std::string CyclotomicField::describe() const {
  std::ostringstream os;
  os << "Q_" << p_ << "(zeta_" << p_ << "^" << N_ << "), e=" << e_ << ", P=" << precision_;
  return os.str();
}

// ---------------------------------------------------------------------------
// CycloElement construction

CycloElement::CycloElement(FieldPtr field, std::int64_t shift, int rel, std::vector<mpz_class> c)
    : field_(std::move(field)), shift_(shift), rel_(rel), c_(std::move(c)) {
  normalize();
}

void CycloElement::normalize() {
  if (rel_ <= 0) {
    rel_ = 0;
    for (auto& x : c_) x = 0;
    shift_ = clamp_shift(shift_);
    return;
  }
  const mpz_class& mod = field_->power_of_p(rel_);
  for (auto& x : c_) reduce_into(x, mod);
  // Smallest p-adic valuation among the coefficients.
  int k = rel_;
  const auto p = static_cast<unsigned long>(field_->prime());
  for (const auto& x : c_) {
    if (x == 0) continue;
    int v = static_cast<int>(mpz_scan1(x.get_mpz_t(), 0));
    if (p != 2) {
      v = 0;
      mpz_class t = x;
      while (v < k && mpz_divisible_ui_p(t.get_mpz_t(), p)) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
        ++v;
      }
    }
    k = std::min(k, v);
    if (k == 0) break;
  }
  if (k == rel_) {
    shift_ = clamp_shift(shift_ + rel_);
    rel_ = 0;
    for (auto& x : c_) x = 0;
    return;
  }
  if (k > 0) {
    const mpz_class& pk = field_->power_of_p(k);
    for (auto& x : c_) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), pk.get_mpz_t());
    shift_ += k;
    rel_ -= k;
  }
}

CycloElement CycloElement::zero(FieldPtr field) {
  auto e = static_cast<std::size_t>(field->degree());
  return CycloElement(std::move(field), kExactShift, 0, std::vector<mpz_class>(e));
}

CycloElement CycloElement::one(FieldPtr field) { return integer(std::move(field), 1); }

CycloElement CycloElement::integer(FieldPtr field, const mpz_class& n) { return rational(std::move(field), mpq_class(n)); }

CycloElement CycloElement::rational(FieldPtr field, const mpq_class& q) {
  if (q == 0) return zero(std::move(field));
  PadicScalar s = PadicScalar::from_rational(field->prime(), q, field->precision());
  std::vector<mpz_class> c(static_cast<std::size_t>(field->degree()));
  c[0] = s.unit();
  int P = field->precision();
  return CycloElement(std::move(field), s.valuation(), P, std::move(c));
}

CycloElement CycloElement::pi(FieldPtr field) {
  std::vector<mpz_class> c(static_cast<std::size_t>(field->degree()));
  if (field->degree() == 1) {
    // e = 1: pi = zeta - 1 = -p (E(T) = T + p).
    return rational(std::move(field), mpq_class(-field->prime()));
  }
  c[1] = 1;
  int P = field->precision();
  return CycloElement(std::move(field), 0, P, std::move(c));
}

CycloElement CycloElement::zeta(FieldPtr field) { return one(field) + pi(field); }

CycloElement CycloElement::zeta_power(FieldPtr field, std::int64_t k) {
  std::int64_t order = field->root_order();
  k %= order;
  if (k < 0) k += order;
  return zeta(std::move(field)).pow(k);
}

CycloElement CycloElement::from_zeta_basis(FieldPtr field, std::span<const mpq_class> coeffs) {
  CycloElement acc = zero(field);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc.times_zeta() + rational(field, *it);
  return acc;
}

CycloElement CycloElement::from_pi_basis(FieldPtr field, std::span<const mpz_class> coeffs, std::int64_t shift) {
  auto e = static_cast<std::size_t>(field->degree());
  if (coeffs.size() > e) throw std::invalid_argument("from_pi_basis: more than e coefficients");
  std::vector<mpz_class> c(e);
  std::copy(coeffs.begin(), coeffs.end(), c.begin());
  int P = field->precision();
  return CycloElement(std::move(field), shift, P, std::move(c));
}

// ---------------------------------------------------------------------------
// Accessors

PadicScalar CycloElement::coefficient(int i) const {
  const mpz_class& x = c_.at(static_cast<std::size_t>(i));
  int p = field_->prime();
  if (x == 0) return PadicScalar::zero(p, std::max(rel_, 1));
  int v = padic_valuation(x, p);
  mpz_class u = x;
  mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), field_->power_of_p(v).get_mpz_t());
  return PadicScalar(p, shift_ + v, u, rel_ - v);
}

Valuation CycloElement::valuation() const {
  if (rel_ == 0) return Valuation::zero_at_precision(Rational(shift_));
  const auto p = static_cast<unsigned long>(field_->prime());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!mpz_divisible_ui_p(c_[i].get_mpz_t(), p))
      return Valuation::finite(Rational(shift_) + Rational(static_cast<std::int64_t>(i), field_->degree()));
  }
  // Unreachable for a normalized element.
  throw std::logic_error("CycloElement: non-normalized element");
}

const FieldPtr& common_field(const CycloElement& a, const CycloElement& b) {
  if (!a.field().compatible(b.field()))
    throw FieldMismatch("operands live in different fields: " + a.field().describe() + " vs " + b.field().describe());
  return a.field_ptr();
}

// ---------------------------------------------------------------------------
// Arithmetic

CycloElement CycloElement::operator-() const {
  std::vector<mpz_class> c(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] = -c_[i];
  return CycloElement(field_, shift_, rel_, std::move(c));
}

CycloElement operator+(const CycloElement& a, const CycloElement& b) {
  const FieldPtr& field = common_field(a, b);
  std::int64_t s = std::min(a.shift_, b.shift_);
  std::int64_t abs_prec = std::min(a.absolute_precision(), b.absolute_precision());
  std::int64_t r = abs_prec - s;
  std::vector<mpz_class> c(a.c_.size());
  if (r <= 0) return CycloElement(field, abs_prec, 0, std::move(c));
  int rel = static_cast<int>(std::min<std::int64_t>(r, field->precision()));
  auto add_scaled = [&](const CycloElement& x) {
    std::int64_t k = x.shift_ - s;
    if (x.rel_ == 0 || k >= rel) return;
    const mpz_class& pk = field->power_of_p(static_cast<int>(k));
    for (std::size_t i = 0; i < c.size(); ++i) mpz_addmul(c[i].get_mpz_t(), x.c_[i].get_mpz_t(), pk.get_mpz_t());
  };
  add_scaled(a);
  add_scaled(b);
  return CycloElement(field, s, rel, std::move(c));
}

CycloElement operator-(const CycloElement& a, const CycloElement& b) { return a + (-b); }

CycloElement operator*(const CycloElement& a, const CycloElement& b) {
  const FieldPtr& field = common_field(a, b);
  const std::size_t e = a.c_.size();
  std::int64_t shift = clamp_shift(a.shift_ + b.shift_);
  int rel = std::min(a.rel_, b.rel_);
  if (rel == 0) return CycloElement(field, shift, 0, std::vector<mpz_class>(e));

  const mpz_class& mod = field->power_of_p(rel);
  std::vector<mpz_class> prod(2 * e - 1);
  for (std::size_t i = 0; i < e; ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < e; ++j) {
      if (b.c_[j] == 0) continue;
      mpz_addmul(prod[i + j].get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
    }
  }
  // pi^e = sum fold[j] pi^j; fold from the top so each folded coefficient
  // is already reduced.
  const auto& fold = field->fold();
  for (std::size_t i = prod.size() - 1; i >= e; --i) {
    reduce_into(prod[i], mod);
    if (prod[i] == 0) continue;
    for (std::size_t j = 0; j < e; ++j)
      mpz_addmul(prod[i - e + j].get_mpz_t(), prod[i].get_mpz_t(), fold[j].get_mpz_t());
  }
  prod.resize(e);
  return CycloElement(field, shift, rel, std::move(prod));
}

CycloElement CycloElement::scaled_by_p(std::int64_t k) const {
  if (rel_ == 0 && shift_ >= kExactShift) return *this;
  return CycloElement(field_, shift_ + k, rel_, c_);
}

CycloElement CycloElement::times_zeta() const {
  if (rel_ == 0) return *this;
  const std::size_t e = c_.size();
  std::vector<mpz_class> c(c_);
  // c += c * pi
  const mpz_class top = c_[e - 1];
  for (std::size_t i = e - 1; i >= 1; --i) c[i] += c_[i - 1];
  const auto& fold = field_->fold();
  for (std::size_t j = 0; j < e; ++j) mpz_addmul(c[j].get_mpz_t(), top.get_mpz_t(), fold[j].get_mpz_t());
  return CycloElement(field_, shift_, rel_, std::move(c));
}

CycloElement CycloElement::times_pi_power(int j) const {
  CycloElement x = *this;
  const std::size_t e = c_.size();
  const auto& fold = field_->fold();
  for (int step = 0; step < j; ++step) {
    std::vector<mpz_class> c(e);
    for (std::size_t i = 1; i < e; ++i) c[i] = x.c_[i - 1];
    for (std::size_t k = 0; k < e; ++k) mpz_addmul(c[k].get_mpz_t(), x.c_[e - 1].get_mpz_t(), fold[k].get_mpz_t());
    x = CycloElement(field_, x.shift_, x.rel_, std::move(c));
  }
  return x;
}

CycloElement CycloElement::unit_inverse() const {
  // Newton iteration y <- y (2 - u y); the error 1 - u y doubles its
  // pi-adic valuation each round.
  mpz_class c0inv;
  const mpz_class& mod = field_->power_of_p(rel_);
  mpz_invert(c0inv.get_mpz_t(), c_[0].get_mpz_t(), mod.get_mpz_t());
  std::vector<mpz_class> start(c_.size());
  start[0] = c0inv;
  CycloElement y(field_, 0, rel_, std::move(start));
  const CycloElement one_ = one(field_).truncated(rel_);
  for (int iter = 0; iter < 64; ++iter) {
    CycloElement err = one_ - *this * y;
    if (err.is_zero_at_precision()) return y;
    y = y + y * err;
  }
  throw std::logic_error("unit_inverse: Newton iteration did not converge");
}

CycloElement CycloElement::inverse() const {
  if (rel_ == 0)
    throw InsufficientPrecision("invert: element is zero at precision " + std::to_string(shift_));
  const auto p = static_cast<unsigned long>(field_->prime());
  std::size_t j = 0;
  while (mpz_divisible_ui_p(c_[j].get_mpz_t(), p)) ++j;
  CycloElement unit(field_, 0, rel_, c_);
  if (j == 0) return unit.unit_inverse().scaled_by_p(-shift_);
  // x^{-1} = pi^{e-j} (x pi^{e-j})^{-1}, and x pi^{e-j} has integral valuation.
  CycloElement lifted = unit.times_pi_power(static_cast<int>(c_.size() - j));
  CycloElement inv = lifted.inverse();
  return inv.times_pi_power(static_cast<int>(c_.size() - j)).scaled_by_p(-shift_);
}

CycloElement CycloElement::pow(std::int64_t n) const {
  if (n < 0) return inverse().pow(-n);
  CycloElement result = one(field_);
  CycloElement base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

bool CycloElement::equals_at_precision(const CycloElement& o) const { return (*this - o).is_zero_at_precision(); }

CycloElement CycloElement::truncated(std::int64_t absolute) const {
  if (absolute >= absolute_precision()) return *this;
  std::int64_t rel = absolute - shift_;
  if (rel <= 0) return CycloElement(field_, absolute, 0, std::vector<mpz_class>(c_.size()));
  return CycloElement(field_, shift_, static_cast<int>(rel), c_);
}

std::string CycloElement::to_string() const {
  std::ostringstream os;
  if (rel_ == 0) {
    if (is_exact_zero()) return "0";
    os << "O(p^" << shift_ << ")";
    return os.str();
  }
  if (shift_ != 0) os << "p^" << shift_ << "*";
  os << "(";
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[i].get_str();
    if (i > 0) os << "*pi^" << i;
  }
  os << ") + O(p^" << absolute_precision() << ")";
  return os.str();
}

CycloElement embed_up(const CycloElement& a, const FieldPtr& target) {
  const CyclotomicField& src = a.field();
  if (target->prime() != src.prime()) throw FieldMismatch("embed_up: different primes");
  if (target->level() < src.level())
    throw std::invalid_argument("embed_up: target level " + std::to_string(target->level()) + " < source level " +
                                std::to_string(src.level()));
  if (a.is_zero_at_precision()) {
    if (a.is_exact_zero()) return CycloElement::zero(target);
    return CycloElement::zero(target).truncated(a.absolute_precision());
  }
  std::int64_t step = 1;
  for (int i = src.level(); i < target->level(); ++i) step *= src.prime();
  const CycloElement image_of_pi = CycloElement::zeta_power(target, step) - CycloElement::one(target);
  CycloElement acc = CycloElement::zero(target);
  const auto& c = a.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * image_of_pi + CycloElement::integer(target, *it);
  return acc.truncated(a.relative_precision()).scaled_by_p(a.shift());
}

}  // namespace cyclopadic
