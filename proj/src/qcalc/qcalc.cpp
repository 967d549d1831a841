#include "cyclopadic/qcalc.hpp"

#include <mpfr.h>

#include <algorithm>
#include <memory>
#include <utility>
#include <vector>
#include <sstream>
#include <stdexcept>

namespace cyclopadic {

// ---------------------------------------------------------------------------
// QPolynomial

QPolynomial::QPolynomial(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

QPolynomial QPolynomial::monomial(int degree, const mpz_class& c) {
  std::vector<mpz_class> v(static_cast<std::size_t>(degree) + 1);
  v.back() = c;
  return QPolynomial(std::move(v));
}

void QPolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

mpz_class QPolynomial::coefficient(int i) const {
  if (i < 0 || i > degree()) return 0;
  return c_[static_cast<std::size_t>(i)];
}

QPolynomial operator+(const QPolynomial& a, const QPolynomial& b) {
  std::vector<mpz_class> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return QPolynomial(std::move(c));
}

QPolynomial operator-(const QPolynomial& a, const QPolynomial& b) {
  std::vector<mpz_class> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return QPolynomial(std::move(c));
}

QPolynomial operator*(const QPolynomial& a, const QPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpz_class> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return QPolynomial(std::move(c));
}

QPolynomial QPolynomial::shifted(int k) const {
  if (is_zero()) return {};
  std::vector<mpz_class> c(static_cast<std::size_t>(k));
  c.insert(c.end(), c_.begin(), c_.end());
  return QPolynomial(std::move(c));
}

mpz_class QPolynomial::evaluate(const mpz_class& q) const {
  mpz_class acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * q + *it;
  return acc;
}

CycloElement QPolynomial::evaluate(const CycloElement& q) const {
  const FieldPtr& F = q.field_ptr();
  CycloElement acc = CycloElement::zero(F);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * q + CycloElement::integer(F, *it);
  return acc;
}

std::string QPolynomial::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << (c_[i] < 0 ? " - " : " + ");
    else if (c_[i] < 0) os << "-";
    first = false;
    mpz_class a = abs(c_[i]);
    if (i == 0 || a != 1) os << a.get_str();
    if (i >= 1) os << "q";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

std::vector<QPolynomial> q_binomial_row(int n, int kmax) {
  if (n < 0) throw std::invalid_argument("q_binomial_row: n must be >= 0");
  if (kmax < 0 || kmax > n) kmax = n;
  // row[j] = [m choose j]_q for the current m, updated in place from the
  // top so row[j - 1] still holds the previous m.
  std::vector<std::vector<mpz_class>> row(static_cast<std::size_t>(kmax) + 1);
  row[0] = {1};
  for (int m = 0; m < n; ++m) {
    for (int j = std::min(kmax, m + 1); j >= 1; --j) {
      auto& cur = row[static_cast<std::size_t>(j)];
      const auto& prev = row[static_cast<std::size_t>(j) - 1];
      std::vector<mpz_class> next(std::max(prev.size(), cur.empty() ? 0 : cur.size() + static_cast<std::size_t>(j)));
      for (std::size_t i = 0; i < prev.size(); ++i) next[i] = prev[i];
      for (std::size_t i = 0; i < cur.size(); ++i) next[i + static_cast<std::size_t>(j)] += cur[i];
      cur = std::move(next);
    }
  }
  std::vector<QPolynomial> out;
  out.reserve(row.size());
  for (auto& r : row) out.emplace_back(std::move(r));
  return out;
}

QPolynomial q_binomial_poly(int n, int k) {
  if (n < 0 || k < 0) throw std::invalid_argument("q_binomial_poly: n, k must be >= 0");
  if (k > n) return {};
  return q_binomial_row(n, k)[static_cast<std::size_t>(k)];
}

QPolynomial q_pochhammer_poly(int n) {
  QPolynomial acc = QPolynomial::monomial(0);
  for (int i = 1; i <= n; ++i) acc = acc * (QPolynomial::monomial(0) - QPolynomial::monomial(i));
  return acc;
}

// ---------------------------------------------------------------------------
// Products in K_N

CycloElement q_pochhammer(const CycloElement& a, const CycloElement& q, std::int64_t n) {
  const FieldPtr& F = common_field(a, q);
  if (n < 0) throw std::invalid_argument("q_pochhammer: n must be >= 0");
  const CycloElement one = CycloElement::one(F);
  CycloElement acc = one;
  CycloElement aq = a;
  for (std::int64_t i = 0; i < n; ++i) {
    acc *= one - aq;
    if (i + 1 < n) aq *= q;
  }
  return acc;
}

CycloElement zq_coefficient(const CycloElement& zeta, const CycloElement& q, std::int64_t k) {
  const FieldPtr& F = common_field(zeta, q);
  if (k < 0) throw std::invalid_argument("zq_coefficient: k must be >= 0");
  CycloElement acc = CycloElement::one(F);
  CycloElement qi = CycloElement::one(F);
  for (std::int64_t i = 0; i < k; ++i) {
    acc *= zeta - qi;
    if (i + 1 < k) qi *= q;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// beta_p

BetaValue beta(int p, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("beta: n must be >= 1");
  __int128 total = 0;
  __int128 pk = 1;
  std::int64_t q = n;  // floor(n / p^k)
  while (q > 0) {
    std::int64_t next = q / p;
    total += pk * (q - next);
    pk *= p;
    q = next;
  }
  if (total > INT64_MAX) throw std::overflow_error("beta: value exceeds 64 bits");
  return {n, p, static_cast<std::int64_t>(total)};
}

Rational poch_valuation_formula(int p, int N, std::int64_t n) {
  std::int64_t pn = 1;
  for (int i = 0; i < N; ++i) pn *= p;
  if (n < 1 || n >= pn)
    throw std::out_of_range("poch_valuation_formula: n = " + std::to_string(n) + " outside [1, p^N)");
  return Rational(beta(p, n).value, pn / p * (p - 1));
}

// ---------------------------------------------------------------------------
// Directed-rounding log comparisons

namespace {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(x_, prec); }
  ~Mpfr() { mpfr_clear(x_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return x_; }

 private:
  mpfr_t x_;
};

// Exponent k when x = p^k, else false.
bool exact_power(const mpq_class& x, int p, long& k) {
  if (x <= 0) return false;
  mpz_class num = x.get_num(), den = x.get_den();
  if (num != 1 && den != 1) return false;
  const bool inverse = num == 1 && den != 1;
  mpz_class& m = inverse ? den : num;
  long e = 0;
  while (m > 1 && mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
    ++e;
  }
  if (m != 1) return false;
  k = inverse ? -e : e;
  return true;
}

// Working registers for one precision, reused across calls on a thread.
struct LogScratch {
  explicit LogScratch(mpfr_prec_t prec)
      : t(prec), a(prec), lx_lo(prec), lx_hi(prec), d_lo(prec), d_hi(prec), lp_lo(prec), lp_hi(prec), L_lo(prec), L_hi(prec) {}
  Mpfr t, a, lx_lo, lx_hi, d_lo, d_hi, lp_lo, lp_hi, L_lo, L_hi;
  int cached_p = -1;
};

LogScratch& scratch(mpfr_prec_t prec) {
  thread_local std::vector<std::pair<mpfr_prec_t, std::unique_ptr<LogScratch>>> pool;
  for (auto& [pr, s] : pool)
    if (pr == prec) return *s;
  pool.emplace_back(prec, std::make_unique<LogScratch>(prec));
  return *pool.back().second;
}

// [lo, hi] containing ln(m) for an integer m >= 1.
void log_bracket(const mpz_class& m, LogScratch& s, mpfr_ptr lo, mpfr_ptr hi) {
  if (mpfr_set_z(s.t.get(), m.get_mpz_t(), MPFR_RNDN) == 0) {
    // Exact argument: the correctly rounded log is within one ulp either way.
    mpfr_log(s.a.get(), s.t.get(), MPFR_RNDN);
    mpfr_set(lo, s.a.get(), MPFR_RNDN);
    mpfr_set(hi, s.a.get(), MPFR_RNDN);
    if (m != 1) {
      mpfr_nextbelow(lo);
      mpfr_nextabove(hi);
    }
    return;
  }
  mpfr_set_z(s.t.get(), m.get_mpz_t(), MPFR_RNDD);
  mpfr_log(lo, s.t.get(), MPFR_RNDD);
  mpfr_set_z(s.t.get(), m.get_mpz_t(), MPFR_RNDU);
  mpfr_log(hi, s.t.get(), MPFR_RNDU);
}

// Interval [lo, hi] containing coef * log_p(x) - rhs.
void log_product_interval(const mpq_class& coef, const mpq_class& x, int p, const mpq_class& rhs, mpfr_prec_t prec,
                          mpfr_ptr lo, mpfr_ptr hi) {
  LogScratch& s = scratch(prec);
  // ln x = ln num - ln den.
  log_bracket(x.get_num(), s, s.lx_lo.get(), s.lx_hi.get());
  if (x.get_den() != 1) {
    log_bracket(x.get_den(), s, s.d_lo.get(), s.d_hi.get());
    mpfr_sub(s.lx_lo.get(), s.lx_lo.get(), s.d_hi.get(), MPFR_RNDD);
    mpfr_sub(s.lx_hi.get(), s.lx_hi.get(), s.d_lo.get(), MPFR_RNDU);
  }
  if (s.cached_p != p) {
    mpfr_set_ui(s.t.get(), static_cast<unsigned long>(p), MPFR_RNDN);
    mpfr_log(s.lp_lo.get(), s.t.get(), MPFR_RNDD);
    mpfr_log(s.lp_hi.get(), s.t.get(), MPFR_RNDU);
    s.cached_p = p;
  }

  // log_p x = ln x / ln p with ln p > 0.
  mpfr_div(s.L_lo.get(), s.lx_lo.get(), mpfr_sgn(s.lx_lo.get()) >= 0 ? s.lp_hi.get() : s.lp_lo.get(), MPFR_RNDD);
  mpfr_div(s.L_hi.get(), s.lx_hi.get(), mpfr_sgn(s.lx_hi.get()) >= 0 ? s.lp_lo.get() : s.lp_hi.get(), MPFR_RNDU);

  if (sgn(coef) >= 0) {
    mpfr_mul_q(lo, s.L_lo.get(), coef.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(hi, s.L_hi.get(), coef.get_mpq_t(), MPFR_RNDU);
  } else {
    mpfr_mul_q(lo, s.L_hi.get(), coef.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(hi, s.L_lo.get(), coef.get_mpq_t(), MPFR_RNDU);
  }
  mpfr_sub_q(lo, lo, rhs.get_mpq_t(), MPFR_RNDD);
  mpfr_sub_q(hi, hi, rhs.get_mpq_t(), MPFR_RNDU);
}

struct SignedGap {
  std::strong_ordering sign;
  // Certified bracket of coef * log_p(x) - rhs.
  double lo;
  double hi;
};

SignedGap certified_gap(const mpq_class& coef, const mpq_class& x, int p, const mpq_class& rhs) {
  if (x <= 0) throw std::domain_error("compare_log_product: x must be positive");
  long k = 0;
  if (exact_power(x, p, k)) {
    mpq_class g = coef * k - rhs;
    double d = g.get_d();
    return {sgn(g) <=> 0, d, d};
  }
  for (mpfr_prec_t prec = 64; prec <= 1 << 16; prec *= 4) {
    Mpfr lo(prec), hi(prec);
    log_product_interval(coef, x, p, rhs, prec, lo.get(), hi.get());
    double dlo = mpfr_get_d(lo.get(), MPFR_RNDD), dhi = mpfr_get_d(hi.get(), MPFR_RNDU);
    if (mpfr_sgn(lo.get()) > 0) return {std::strong_ordering::greater, dlo, dhi};
    if (mpfr_sgn(hi.get()) < 0) return {std::strong_ordering::less, dlo, dhi};
    if (coef == 0) return {sgn(-rhs) <=> 0, dlo, dhi};
  }
  // log_p x is irrational here, so a gap of exactly zero is impossible;
  // running out of precision means an absurdly tight input.
  throw std::runtime_error("compare_log_product: precision limit reached");
}

}  // namespace

std::strong_ordering compare_log_product(const mpq_class& coef, const mpq_class& x, int p, const mpq_class& rhs) {
  return certified_gap(coef, x, p, rhs).sign;
}

BoundCheck check_beta_lower_bound(int p, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("check_beta_lower_bound: n must be >= 1");
  const std::int64_t b = beta(p, n).value;
  // beta >= c log_p n - np/(p-1)  <=>  c log_p n - (beta + np/(p-1)) <= 0.
  mpq_class coef(mpz_class(n) * (p - 1), p);
  mpq_class shift(mpz_class(n) * p, p - 1);
  coef.canonicalize();
  shift.canonicalize();
  SignedGap g = certified_gap(coef, mpq_class(n), p, mpq_class(b) + shift);
  BoundCheck r;
  r.beta = b;
  r.holds = g.sign <= 0;
  r.slack = -g.hi;
  r.bound = static_cast<double>(b) + g.lo;
  return r;
}

BoundCheck check_corollary_bound(int p, int N, std::int64_t n) {
  __int128 p8 = 1, pN = 1;
  for (int i = 0; i < 8; ++i) p8 *= p;
  for (int i = 0; i < N && pN <= INT64_MAX; ++i) pN *= p;
  if (n < p8 || n >= pN)
    throw std::out_of_range("check_corollary_bound: n = " + std::to_string(n) + " outside [p^8, p^N)");
  const std::int64_t b = beta(p, n).value;
  SignedGap g = certified_gap(mpq_class(n, 4), mpq_class(n), p, mpq_class(b));
  BoundCheck r;
  r.beta = b;
  r.holds = g.sign <= 0;
  r.slack = -g.hi;
  r.bound = static_cast<double>(b) + g.lo;
  if (!r.holds && n <= (1 << 16)) {
    // p^{4 beta} >= n^n decides the same inequality in integers.
    mpz_class lhs, rhs;
    mpz_ui_pow_ui(lhs.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(4 * b));
    mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(n));
    r.holds = lhs >= rhs;
  }
  return r;
}

}  // namespace cyclopadic
