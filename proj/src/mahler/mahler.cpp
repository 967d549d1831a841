#include "cyclopadic/mahler.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "cyclopadic/errors.hpp"

namespace cyclopadic {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::int64_t period(const LocallyConstant& f) { return static_cast<std::int64_t>(f.table.size()); }

const FieldPtr& model_field(const FunctionModel& f) {
  return std::visit(Overloaded{
                        [](const ExponentialSum& s) -> const FieldPtr& {
                          if (s.terms.empty()) throw std::invalid_argument("empty exponential sum");
                          return s.terms.front().base.field_ptr();
                        },
                        [](const LocallyConstant& t) -> const FieldPtr& { return t.table.at(0).field_ptr(); },
                        [](const Sampled& s) -> const FieldPtr& { return s.values.at(0).field_ptr(); },
                        [](const FiniteCoeffs& c) -> const FieldPtr& { return c.series.q.field_ptr(); },
                    },
                    f);
}

// Rows of [m choose j]_q at integer m, j <= kmax, advanced one m at a time.
class GaussianRows {
 public:
  GaussianRows(const CycloElement& q, std::int64_t kmax) : row_(static_cast<std::size_t>(kmax) + 1, CycloElement::zero(q.field_ptr())) {
    row_[0] = CycloElement::one(q.field_ptr());
    q_pow_.push_back(CycloElement::one(q.field_ptr()));
    for (std::int64_t j = 1; j <= kmax; ++j) q_pow_.push_back(q_pow_.back() * q);
  }

  // Current m.
  std::int64_t m() const noexcept { return m_; }
  const std::vector<CycloElement>& row() const noexcept { return row_; }

  void advance() {
    std::int64_t top = std::min<std::int64_t>(static_cast<std::int64_t>(row_.size()) - 1, m_ + 1);
    for (std::int64_t j = top; j >= 1; --j) {
      auto uj = static_cast<std::size_t>(j);
      row_[uj] = row_[uj - 1] + q_pow_[uj] * row_[uj];
    }
    ++m_;
  }

 private:
  std::vector<CycloElement> row_;
  std::vector<CycloElement> q_pow_;
  std::int64_t m_ = 0;
};

CycloElement dot_row(const CoeffSeries& s, const std::vector<CycloElement>& row, std::int64_t upto) {
  CycloElement acc = CycloElement::zero(s.q.field_ptr());
  for (std::int64_t k = 0; k <= upto && k < s.size(); ++k) {
    auto uk = static_cast<std::size_t>(k);
    acc += s.coeffs[uk] * row[uk];
  }
  return acc;
}

// f(0..count-1) for a series, sharing one pass of Gaussian rows.
std::vector<CycloElement> evaluate_range(const CoeffSeries& s, std::int64_t count) {
  std::vector<CycloElement> out;
  out.reserve(static_cast<std::size_t>(count));
  std::int64_t kmax = std::max<std::int64_t>(s.size() - 1, 0);
  GaussianRows rows(s.q, kmax);
  for (std::int64_t x = 0; x < count; ++x) {
    out.push_back(dot_row(s, rows.row(), x));
    rows.advance();
  }
  return out;
}

std::vector<CycloElement> samples(const FunctionModel& f, std::int64_t count) {
  if (const auto* c = std::get_if<FiniteCoeffs>(&f)) return evaluate_range(c->series, count);
  std::vector<CycloElement> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t x = 0; x < count; ++x) out.push_back(evaluate(f, x));
  return out;
}

// q^{-x} for x < count.
std::vector<CycloElement> inverse_powers(const CycloElement& q, std::int64_t count) {
  std::vector<CycloElement> out;
  CycloElement qinv = q.inverse();
  CycloElement cur = CycloElement::one(q.field_ptr());
  for (std::int64_t x = 0; x < count; ++x) {
    out.push_back(cur);
    cur *= qinv;
  }
  return out;
}

const FieldPtr& same_field(const FieldPtr& a, const CycloElement& q) {
  if (!a->compatible(q.field()))
    throw FieldMismatch("function and q live in different fields: " + a->describe() + " vs " + q.field().describe());
  return a;
}

bool is_one(const CycloElement& q) { return (q - CycloElement::one(q.field_ptr())).is_zero_at_precision(); }

// Coefficients from samples: repeated T on the value table.
std::vector<CycloElement> coeffs_from_samples(std::vector<CycloElement> vals, const CycloElement& q, std::int64_t K) {
  const FieldPtr& F = q.field_ptr();
  std::vector<CycloElement> qinv = inverse_powers(q, K + 1);
  std::vector<CycloElement> out;
  CycloElement q_binom = CycloElement::one(F);  // q^{C(k,2)}
  CycloElement q_k = CycloElement::one(F);      // q^k
  for (std::int64_t k = 0; k <= K; ++k) {
    out.push_back(q_binom * vals[0]);
    q_binom *= q_k;
    q_k *= q;
    if (k == K) break;
    for (std::size_t x = 0; x + 1 < vals.size(); ++x) vals[x] = (vals[x + 1] - vals[x]) * qinv[x];
    vals.pop_back();
  }
  return out;
}

}  // namespace

FunctionModel exponential(const CycloElement& base, const CycloElement& coeff) {
  common_field(base, coeff);
  if (!((base - CycloElement::one(base.field_ptr())).valuation() > Valuation::finite(0)))
    throw std::invalid_argument("exponential: base must satisfy v(base - 1) > 0");
  return ExponentialSum{{ExpTerm{coeff, base}}};
}

FunctionModel exponential(const CycloElement& base) { return exponential(base, CycloElement::one(base.field_ptr())); }

FunctionModel constant_function(const CycloElement& c) { return ExponentialSum{{ExpTerm{c, CycloElement::one(c.field_ptr())}}}; }

CycloElement evaluate(const FunctionModel& f, std::int64_t x) {
  if (x < 0) throw std::invalid_argument("evaluate: x must be >= 0");
  return std::visit(Overloaded{
                        [&](const ExponentialSum& s) {
                          CycloElement acc = CycloElement::zero(model_field(f));
                          for (const auto& t : s.terms) acc += t.coeff * t.base.pow(x);
                          return acc;
                        },
                        [&](const LocallyConstant& t) { return t.table[static_cast<std::size_t>(x % period(t))]; },
                        [&](const Sampled& s) {
                          if (x >= static_cast<std::int64_t>(s.values.size()))
                            throw std::out_of_range("evaluate: x = " + std::to_string(x) + " beyond sampled horizon " +
                                                    std::to_string(s.values.size()));
                          return s.values[static_cast<std::size_t>(x)];
                        },
                        [&](const FiniteCoeffs& c) { return evaluate_partial(c.series, x); },
                    },
                    f);
}

FunctionModel apply_T(const FunctionModel& f, const CycloElement& q, std::int64_t horizon) {
  same_field(model_field(f), q);
  return std::visit(
      Overloaded{
          [&](const ExponentialSum& s) -> FunctionModel {
            // T(c b^x) = c (b - 1) (b/q)^x.
            CycloElement qinv = q.inverse();
            ExponentialSum out;
            for (const auto& t : s.terms)
              out.terms.push_back({t.coeff * (t.base - CycloElement::one(q.field_ptr())), t.base * qinv});
            return out;
          },
          [&](const LocallyConstant& t) -> FunctionModel {
            if (is_one(q)) {
              LocallyConstant out{t.level, {}};
              const std::int64_t P = period(t);
              for (std::int64_t x = 0; x < P; ++x)
                out.table.push_back(t.table[static_cast<std::size_t>((x + 1) % P)] - t.table[static_cast<std::size_t>(x)]);
              return out;
            }
            std::int64_t H = horizon < 0 ? period(t) : horizon;
            std::vector<CycloElement> qinv = inverse_powers(q, H);
            Sampled out;
            for (std::int64_t x = 0; x < H; ++x)
              out.values.push_back((evaluate(f, x + 1) - evaluate(f, x)) * qinv[static_cast<std::size_t>(x)]);
            return out;
          },
          [&](const Sampled& s) -> FunctionModel {
            if (s.values.size() < 2) throw std::out_of_range("apply_T: sampled horizon exhausted");
            std::vector<CycloElement> qinv = inverse_powers(q, static_cast<std::int64_t>(s.values.size()) - 1);
            Sampled out;
            for (std::size_t x = 0; x + 1 < s.values.size(); ++x)
              out.values.push_back((s.values[x + 1] - s.values[x]) * qinv[x]);
            return out;
          },
          [&](const FiniteCoeffs& c) -> FunctionModel {
            if (!c.series.q.equals_at_precision(q))
              throw UnsupportedOperation("apply_T: FiniteCoeffs model expanded over a different q");
            // T(a_k [x,k]_q) = a_k q^{-(k-1)} [x,k-1]_q.
            CoeffSeries out{q, {}, c.series.tail};
            CycloElement qinv = q.inverse();
            CycloElement scale = CycloElement::one(q.field_ptr());
            for (std::size_t k = 1; k < c.series.coeffs.size(); ++k) {
              out.coeffs.push_back(c.series.coeffs[k] * scale);
              scale *= qinv;
            }
            if (out.coeffs.empty()) out.coeffs.push_back(CycloElement::zero(q.field_ptr()));
            // The shifted tail has the same lower bound.
            return FiniteCoeffs{out};
          },
      },
      f);
}

Rational decay_rule_bound(const CycloElement& q, int level, std::int64_t k) {
  const CyclotomicField& F = q.field();
  std::int64_t P = 1;
  for (int i = 0; i < level; ++i) P *= F.prime();
  Valuation vq = (q - CycloElement::one(q.field_ptr())).valuation();
  Rational r = min(vq.lower_bound(), Rational(1));
  return Rational(k / P) * r;
}

CoeffSeries q_mahler_coeffs(const FunctionModel& f, const CycloElement& q, std::int64_t K) {
  if (K < 0) throw std::invalid_argument("q_mahler_coeffs: K must be >= 0");
  const FieldPtr& F = same_field(model_field(f), q);
  const CycloElement one = CycloElement::one(F);
  {
    Valuation vq = (q - one).valuation();
    if (!(vq > Valuation::finite(0))) throw std::invalid_argument("q_mahler_coeffs: need v(q - 1) > 0");
  }

  return std::visit(
      Overloaded{
          [&](const ExponentialSum& s) {
            CoeffSeries out{q, {}, TailBound::unknown()};
            ExponentialSum cur = s;
            CycloElement q_binom = one, q_k = one;
            for (std::int64_t k = 0; k <= K; ++k) {
              CycloElement at0 = CycloElement::zero(F);
              for (const auto& t : cur.terms) at0 += t.coeff;
              out.coeffs.push_back(q_binom * at0);
              q_binom *= q_k;
              q_k *= q;
              if (k < K) cur = std::get<ExponentialSum>(apply_T(cur, q));
            }
            // v(T^k(c b^x)(0)) >= v(c) + k min(v(b - 1), v(q - 1)), increasing in k.
            const Rational vq = (q - one).valuation().lower_bound();
            std::optional<Rational> tail;
            for (const auto& t : s.terms) {
              Rational eps = min((t.base - one).valuation().lower_bound(), vq);
              Rational b = t.coeff.valuation().lower_bound() + Rational(K + 1) * eps;
              tail = tail ? min(*tail, b) : b;
            }
            out.tail = tail ? TailBound::at_least(*tail) : TailBound::zero();
            return out;
          },
          [&](const LocallyConstant& t) {
            CoeffSeries out{q, coeffs_from_samples(samples(f, K + 1), q, K), TailBound::unknown()};
            bool bounded = std::all_of(t.table.begin(), t.table.end(),
                                       [](const CycloElement& c) { return c.valuation().lower_bound() >= Rational(0); });
            if (bounded) out.tail = TailBound::at_least(decay_rule_bound(q, t.level, K + 1));
            return out;
          },
          [&](const Sampled& s) {
            if (static_cast<std::int64_t>(s.values.size()) < K + 1)
              throw std::out_of_range("q_mahler_coeffs: sampled horizon " + std::to_string(s.values.size()) +
                                      " shorter than K + 1 = " + std::to_string(K + 1));
            return CoeffSeries{q, coeffs_from_samples(samples(f, K + 1), q, K), TailBound::unknown()};
          },
          [&](const FiniteCoeffs& c) {
            if (c.series.q.equals_at_precision(q)) {
              CoeffSeries out = c.series;
              if (out.size() > K + 1) {
                // Dropped coefficients are exact data, not a certified bound.
                Rational b = out.tail.kind == TailBound::Kind::Bound ? out.tail.bound : Rational(INT64_MAX / 4);
                bool known = out.tail.kind != TailBound::Kind::Unknown;
                for (std::int64_t k = K + 1; k < out.size(); ++k)
                  b = min(b, out.coeffs[static_cast<std::size_t>(k)].valuation().lower_bound());
                out.coeffs.erase(out.coeffs.begin() + static_cast<std::ptrdiff_t>(K) + 1, out.coeffs.end());
                out.tail = known ? TailBound::at_least(b) : TailBound::unknown();
              }
              while (out.size() < K + 1) out.coeffs.push_back(CycloElement::zero(F));
              return out;
            }
            return CoeffSeries{q, coeffs_from_samples(samples(f, K + 1), q, K), TailBound::unknown()};
          },
      },
      f);
}

CycloElement evaluate_partial(const CoeffSeries& s, std::int64_t x) {
  if (x < 0) throw std::invalid_argument("evaluate_partial: x must be >= 0");
  std::int64_t kmax = std::min<std::int64_t>(x, s.size() - 1);
  if (kmax < 0) return CycloElement::zero(s.q.field_ptr());
  GaussianRows rows(s.q, kmax);
  while (rows.m() < x) rows.advance();
  return dot_row(s, rows.row(), kmax);
}

Valuation sup_norm_coeffs(const CoeffSeries& s) {
  if (s.tail.kind == TailBound::Kind::Unknown) throw InconclusiveTail("sup_norm_coeffs: tail of the series is unknown");
  std::optional<Valuation> best;
  for (const auto& a : s.coeffs) {
    Valuation v = a.valuation();
    best = best ? min(*best, v) : v;
  }
  if (!best) best = Valuation::zero_at_precision(Rational(CycloElement::kExactShift));
  if (s.tail.kind == TailBound::Kind::Bound) {
    if (best->is_zero_at_precision() || s.tail.bound < best->lower_bound())
      throw InconclusiveTail("sup_norm_coeffs: tail bound " + s.tail.bound.to_string() +
                             " does not dominate the stored minimum " + best->to_string());
  }
  return *best;
}

AttainmentReport sup_norm_attainment(const CoeffSeries& s, int L0, int extra) {
  AttainmentReport r;
  r.coeff_min = sup_norm_coeffs(s);
  const int p = s.q.field().prime();
  std::int64_t count = 1;
  for (int i = 0; i < L0; ++i) count *= p;
  std::vector<CycloElement> vals;
  for (int L = L0; L <= L0 + extra; ++L, count *= p) {
    vals = evaluate_range(s, count);
    std::optional<Valuation> m;
    for (const auto& v : vals) m = m ? min(*m, v.valuation()) : v.valuation();
    r.sample_min = *m;
    r.depth = L;
    // |f(x)| <= max |a_k| at every sample.
    if (r.sample_min.lower_bound() < r.coeff_min.lower_bound() && r.sample_min.is_finite()) r.bounded = false;
    if (r.sample_min.is_finite() && r.coeff_min.is_finite() && r.sample_min.value() == r.coeff_min.value()) {
      r.attained = true;
      break;
    }
  }
  return r;
}

DecayReport exp_sum_decay_check(const std::vector<ExpTerm>& terms, std::int64_t K) {
  if (terms.empty()) throw std::invalid_argument("exp_sum_decay_check: no terms");
  const FieldPtr& F = terms.front().base.field_ptr();
  const CycloElement one = CycloElement::one(F);
  DecayReport rep;
  std::optional<Rational> eps, vmin;
  for (const auto& t : terms) {
    common_field(t.base, t.coeff);
    Valuation v = (t.base - one).valuation();
    if (!v.is_finite() || v.value() <= Rational(0))
      throw std::invalid_argument("exp_sum_decay_check: every base needs 0 < v(base - 1) < infinity");
    eps = eps ? min(*eps, v.value()) : v.value();
    Rational vl = t.coeff.valuation().lower_bound();
    vmin = vmin ? min(*vmin, vl) : vl;
  }
  rep.eps_v = *eps;
  rep.m_log = -*vmin;

  std::vector<CycloElement> powers(terms.size(), one);  // (zeta_n - 1)^k
  for (std::int64_t k = 0; k <= K; ++k) {
    CycloElement b = CycloElement::zero(F);
    for (std::size_t n = 0; n < terms.size(); ++n) b += terms[n].coeff * powers[n];
    DecayRecord rec{k, b.valuation(), Rational(k) * rep.eps_v - rep.m_log, false};
    rec.holds = rec.v_b.at_least(rec.bound);
    rep.all_hold = rep.all_hold && rec.holds;
    rep.records.push_back(rec);
    for (std::size_t n = 0; n < terms.size(); ++n) powers[n] *= terms[n].base - one;
  }
  return rep;
}

}  // namespace cyclopadic
