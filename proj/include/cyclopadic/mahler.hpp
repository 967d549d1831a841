#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "cyclopadic/cyclotomic.hpp"
#include "cyclopadic/rational.hpp"
#include "cyclopadic/valuation.hpp"

namespace cyclopadic {

// What is known about the coefficients beyond the stored ones.
struct TailBound {
  enum class Kind { Unknown, Zero, Bound };
  Kind kind = Kind::Unknown;
  // v(a_k) >= bound for every k past the stored range (Kind::Bound).
  Rational bound;

  static TailBound unknown() { return {}; }
  static TailBound zero() { return {Kind::Zero, Rational(0)}; }
  static TailBound at_least(Rational b) { return {Kind::Bound, b}; }
};

// a_0..a_K of sum a_k [x choose k]_q, plus the tail certificate.
struct CoeffSeries {
  CycloElement q;
  std::vector<CycloElement> coeffs;
  TailBound tail;

  std::int64_t size() const noexcept { return static_cast<std::int64_t>(coeffs.size()); }
};

// c * base^x.
struct ExpTerm {
  CycloElement coeff;
  CycloElement base;
};

// sum of c_n * base_n^x; a single term is an exponential.
struct ExponentialSum {
  std::vector<ExpTerm> terms;
};

// f(x) = table[x mod p^level].
struct LocallyConstant {
  int level = 0;
  std::vector<CycloElement> table;
};

// Values f(0)..f(H-1) only; produced by T from a table when q != 1.
struct Sampled {
  std::vector<CycloElement> values;
};

struct FiniteCoeffs {
  CoeffSeries series;
};

using FunctionModel = std::variant<ExponentialSum, LocallyConstant, Sampled, FiniteCoeffs>;

FunctionModel exponential(const CycloElement& base, const CycloElement& coeff);
FunctionModel exponential(const CycloElement& base);
FunctionModel constant_function(const CycloElement& c);

// f(x) for integer x >= 0. Throws std::out_of_range for Sampled models
// beyond their horizon.
CycloElement evaluate(const FunctionModel& f, std::int64_t x);

// (Tf)(x) = (f(x+1) - f(x)) / q^x. A LocallyConstant input is sampled on
// `horizon` + 1 points first (default one period) unless q = 1 at
// precision, in which case the result is again LocallyConstant.
// Throws UnsupportedOperation for FiniteCoeffs over a different q.
FunctionModel apply_T(const FunctionModel& f, const CycloElement& q, std::int64_t horizon = -1);

// a_0..a_K with a_k = q^{C(k,2)} (T^k f)(0).
// Tail certificates: exponential sums get
//   v(a_k) >= min_n (v(c_n) + k * min(v(b_n - 1), v(q - 1))),
// FiniteCoeffs over the same q keep their own tail, LocallyConstant inputs
// with sup norm <= 1 get the decay rule floor(k/p^L) * min(v(q-1), 1).
CoeffSeries q_mahler_coeffs(const FunctionModel& f, const CycloElement& q, std::int64_t K);

// The decay-rule bound floor(k/p^L) * min(v(q-1), 1).
Rational decay_rule_bound(const CycloElement& q, int level, std::int64_t k);

// sum_{k <= K} a_k [x choose k]_q, with the Gaussian binomials at the
// integer x computed by q-Pascal on values.
CycloElement evaluate_partial(const CoeffSeries& s, std::int64_t x);

// min_k v(a_k), i.e. -log_p of the sup norm. Throws InconclusiveTail when
// the tail is unknown or could undercut the stored minimum.
Valuation sup_norm_coeffs(const CoeffSeries& s);

struct AttainmentReport {
  // Sup norm of the samples f(0..p^depth - 1) never beats max |a_k|, and
  // equality was found at `depth`.
  bool bounded = true;
  bool attained = false;
  int depth = 0;
  Valuation coeff_min = Valuation::finite(0);
  Valuation sample_min = Valuation::finite(0);
};

// Samples f = s at 0..p^L - 1 for L = L0 .. L0 + extra, stopping at the
// first depth that attains the coefficient norm.
AttainmentReport sup_norm_attainment(const CoeffSeries& s, int L0, int extra = 2);

struct DecayRecord {
  std::int64_t k;
  Valuation v_b;
  Rational bound;
  bool holds;
};

struct DecayReport {
  // min_n v(zeta_n - 1).
  Rational eps_v;
  // log_p of max_n |lambda_n| = -min_n v(lambda_n).
  Rational m_log;
  std::vector<DecayRecord> records;
  bool all_hold = true;
};

// Classical Mahler coefficients b_k = sum_n lambda_n (zeta_n - 1)^k of
// sum_n lambda_n zeta_n^x, checked against |b_k| <= m * eps^k, i.e.
// v(b_k) >= k * eps_v - m_log.
DecayReport exp_sum_decay_check(const std::vector<ExpTerm>& terms, std::int64_t K);

}  // namespace cyclopadic
