#include "cyclopadic/schwartz.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "cyclopadic/errors.hpp"
#include "cyclopadic/json_io.hpp"

namespace cyclopadic {

namespace {

constexpr std::int64_t kInfinite = INT64_MAX;

std::int64_t ipow64(int p, int k) {
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) {
    if (r > INT64_MAX / p) throw std::overflow_error("lattice too large");
    r *= p;
  }
  return r;
}

mpq_class pow_p(int p, int k) {
  mpq_class r(ipow(p, std::abs(k)));
  return k >= 0 ? r : mpq_class(1) / r;
}

// (y mod p^k) for y in Z_(p), as an integer in [0, p^k).
std::int64_t residue(const mpq_class& y, std::int64_t modulus) {
  if (modulus == 1) return 0;
  mpz_class mod(static_cast<long>(modulus)), inv, r;
  if (mpz_invert(inv.get_mpz_t(), y.get_den_mpz_t(), mod.get_mpz_t()) == 0)
    throw std::logic_error("residue: denominator not prime to p");
  r = y.get_num() * inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  return r.get_si();
}

std::int64_t ceil_half(std::int64_t x) { return x >= 0 ? (x + 1) / 2 : -((-x) / 2); }

// Sum of values weighted by roots of unity zeta_{p^N}^r, collected per
// exponent and combined in one pass.
class RootSum {
 public:
  RootSum(const FieldPtr& field, CharacterValues& chars) : field_(field), chars_(chars) {}

  void add(const mpz_class& exponent_mod_order, const CycloElement& v) {
    std::int64_t r = exponent_mod_order.get_si();
    auto it = buckets_.find(r);
    if (it == buckets_.end()) buckets_.emplace(r, v);
    else it->second += v;
  }

  CycloElement total() {
    const int N = field_->level();
    CycloElement acc = CycloElement::zero(field_);
    if (buckets_.size() <= 8 || field_->root_order() > 4096) {
      for (const auto& [r, v] : buckets_) acc += v * chars_.root_of_unity(N, mpz_class(static_cast<long>(r)));
    } else {
      // Horner in zeta: sum_r B_r zeta^r.
      for (std::int64_t r = field_->root_order() - 1; r >= 0; --r) {
        acc = acc.times_zeta();
        auto it = buckets_.find(r);
        if (it != buckets_.end()) acc += it->second;
      }
    }
    buckets_.clear();
    return acc;
  }

 private:
  FieldPtr field_;
  CharacterValues& chars_;
  std::unordered_map<std::int64_t, CycloElement> buckets_;
};

// Exponent of psi(x) in zeta_{p^N}; throws InsufficientField.
mpz_class exponent_in_field(const AdditiveCharacter& psi, const mpq_class& x, const CyclotomicField& F) {
  auto [k, a] = psi.root(x);
  if (k > F.level())
    throw InsufficientField(k, "character value needs zeta_{p^" + std::to_string(k) + "} but the field has N = " +
                                   std::to_string(F.level()));
  return a * ipow(F.prime(), F.level() - k);
}

void check_window(int cap, std::initializer_list<std::int64_t> exps) {
  for (auto e : exps)
    if (e > cap || -e > cap)
      throw WindowCapExceeded("lattice exponent " + std::to_string(e) + " exceeds window cap " + std::to_string(cap));
}

std::int64_t min_valuation(const std::vector<mpq_class>& xs, int p) {
  std::int64_t v = kInfinite;
  for (const auto& x : xs) v = std::min(v, rational_valuation(x, p));
  return v;
}

}  // namespace

std::int64_t rational_valuation(const mpq_class& x, int p) {
  if (x == 0) return kInfinite;
  return padic_valuation(x, p);
}

// ---------------------------------------------------------------------------
// Characters

std::pair<int, mpz_class> AdditiveCharacter::root(const mpq_class& x) const {
  mpq_class y = conductor * x;
  std::int64_t v = rational_valuation(y, p);
  if (v >= 0) return {0, mpz_class(0)};
  int k = static_cast<int>(-v);
  std::int64_t mod = ipow64(p, k);
  // y = num / (p^k s): the fractional part is (num s^{-1} mod p^k) / p^k.
  mpq_class unit_part = y * mpq_class(ipow(p, k));
  return {k, mpz_class(static_cast<long>(residue(unit_part, mod)))};
}

CharacterValues::CharacterValues(FieldPtr field, AdditiveCharacter psi) : field_(std::move(field)), psi_(std::move(psi)) {
  if (psi_.p != field_->prime()) throw FieldMismatch("character and field use different primes");
  if (psi_.conductor == 0) throw std::invalid_argument("character conductor must be nonzero");
}

CycloElement CharacterValues::root_of_unity(int k, const mpz_class& a) {
  if (k > field_->level())
    throw InsufficientField(k, "need zeta_{p^" + std::to_string(k) + "} but the field has N = " +
                                   std::to_string(field_->level()));
  mpz_class e = a * ipow(field_->prime(), field_->level() - k);
  mpz_class order(static_cast<long>(field_->root_order()));
  mpz_fdiv_r(e.get_mpz_t(), e.get_mpz_t(), order.get_mpz_t());
  std::int64_t key = e.get_si();
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  CycloElement z = CycloElement::zeta_power(field_, key);
  cache_.emplace(key, z);
  return z;
}

CycloElement CharacterValues::operator()(const mpq_class& x) {
  auto [k, a] = psi_.root(x);
  return root_of_unity(k, a);
}

// ---------------------------------------------------------------------------
// SchwartzFunction

SchwartzFunction::SchwartzFunction(FieldPtr field, int d, int m, int n, std::vector<CycloElement> table, bool shape_only)
    : field_(std::move(field)), d_(d), m_(m), n_(n), table_(std::move(table)) {
  if (d < 1) throw std::invalid_argument("SchwartzFunction: dimension must be >= 1");
  if (m + n < 0) throw std::invalid_argument("SchwartzFunction: need m + n >= 0");
  side_ = ipow64(field_->prime(), m + n);
  if (shape_only) return;
  std::int64_t expect = 1;
  for (int i = 0; i < d; ++i) expect *= side_;
  if (static_cast<std::int64_t>(table_.size()) != expect)
    throw std::invalid_argument("SchwartzFunction: table has " + std::to_string(table_.size()) + " entries, expected " +
                                std::to_string(expect));
}

SchwartzFunction SchwartzFunction::zero(FieldPtr field, int d) {
  auto z = CycloElement::zero(field);
  return SchwartzFunction(std::move(field), d, 0, 0, {z});
}

SchwartzFunction SchwartzFunction::from_table(FieldPtr field, int d, int m, int n, std::vector<CycloElement> table) {
  SchwartzFunction f(std::move(field), d, m, n, std::move(table));
  f.canonicalize();
  return f;
}

SchwartzFunction SchwartzFunction::tabulate(FieldPtr field, int d, int m, int n,
                                            const std::function<CycloElement(const Point&)>& value) {
  SchwartzFunction f(field, d, m, n, std::vector<CycloElement>(1, CycloElement::zero(field)), true);
  std::int64_t total = 1;
  for (int i = 0; i < d; ++i) total *= f.side_;
  if (total > (std::int64_t{1} << 24)) throw WindowCapExceeded("tabulate: " + std::to_string(total) + " cosets");
  f.table_.clear();
  f.table_.reserve(static_cast<std::size_t>(total));
  for (std::int64_t flat = 0; flat < total; ++flat) f.table_.push_back(value(f.point(flat)));
  f.canonicalize();
  return f;
}

Point SchwartzFunction::point(std::int64_t flat) const {
  Point x(static_cast<std::size_t>(d_));
  mpq_class scale = pow_p(prime(), -m_);
  for (int i = 0; i < d_; ++i) {
    x[static_cast<std::size_t>(i)] = mpq_class(static_cast<long>(flat % side_)) * scale;
    flat /= side_;
  }
  return x;
}

CycloElement SchwartzFunction::operator()(const Point& x) const {
  if (static_cast<int>(x.size()) != d_) throw std::invalid_argument("SchwartzFunction: point has wrong dimension");
  std::int64_t flat = 0, stride = 1;
  mpq_class scale = pow_p(prime(), m_);
  for (int i = 0; i < d_; ++i) {
    const auto& xi = x[static_cast<std::size_t>(i)];
    if (rational_valuation(xi, prime()) < -m_) return CycloElement::zero(field_);
    flat += residue(xi * scale, side_) * stride;
    stride *= side_;
  }
  return table_[static_cast<std::size_t>(flat)];
}

std::vector<CycloElement> SchwartzFunction::refined(int m2, int n2) const {
  if (m2 < m_ || n2 < n_) throw std::invalid_argument("refined: target lattice must be finer");
  const int p = prime();
  const std::int64_t side2 = ipow64(p, m2 + n2);
  const std::int64_t step = ipow64(p, m2 - m_);  // x in p^{-m} Z_p  <=>  step | j2
  std::int64_t total = 1;
  for (int i = 0; i < d_; ++i) total *= side2;
  std::vector<CycloElement> out;
  out.reserve(static_cast<std::size_t>(total));
  const CycloElement zero = CycloElement::zero(field_);
  for (std::int64_t flat2 = 0; flat2 < total; ++flat2) {
    std::int64_t rest = flat2, flat = 0, stride = 1;
    bool inside = true;
    for (int i = 0; i < d_; ++i) {
      std::int64_t j2 = rest % side2;
      rest /= side2;
      if (j2 % step != 0) {
        inside = false;
        break;
      }
      flat += ((j2 / step) % side_) * stride;
      stride *= side_;
    }
    out.push_back(inside ? table_[static_cast<std::size_t>(flat)] : zero);
  }
  return out;
}

bool SchwartzFunction::is_zero() const {
  return std::all_of(table_.begin(), table_.end(), [](const CycloElement& v) { return v.is_zero_at_precision(); });
}

bool SchwartzFunction::equals(const SchwartzFunction& o) const {
  if (d_ != o.d_ || !field_->compatible(*o.field_)) return false;
  int m2 = std::max(m_, o.m_), n2 = std::max(n_, o.n_);
  auto a = refined(m2, n2);
  auto b = o.refined(m2, n2);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].equals_at_precision(b[i])) return false;
  return true;
}

void SchwartzFunction::canonicalize() {
  if (is_zero()) {
    m_ = n_ = 0;
    side_ = 1;
    table_.assign(1, CycloElement::zero(field_));
    return;
  }
  const int p = prime();
  bool changed = true;
  while (changed && m_ + n_ >= 1) {
    changed = false;
    const std::int64_t small = side_ / p;
    std::int64_t small_total = 1;
    for (int i = 0; i < d_; ++i) small_total *= small;

    // Coarser level: value at j equals value at j mod p^{m+n-1}.
    bool coarse = true;
    for (std::size_t flat = 0; flat < table_.size() && coarse; ++flat) {
      std::int64_t rest = static_cast<std::int64_t>(flat), base = 0, stride = 1;
      for (int i = 0; i < d_; ++i) {
        base += (rest % side_ % small) * stride;
        rest /= side_;
        stride *= side_;
      }
      coarse = table_[flat].equals_at_precision(table_[static_cast<std::size_t>(base)]);
    }
    if (coarse) {
      std::vector<CycloElement> t;
      t.reserve(static_cast<std::size_t>(small_total));
      for (std::int64_t f2 = 0; f2 < small_total; ++f2) {
        std::int64_t rest = f2, flat = 0, stride = 1;
        for (int i = 0; i < d_; ++i) {
          flat += (rest % small) * stride;
          rest /= small;
          stride *= side_;
        }
        t.push_back(table_[static_cast<std::size_t>(flat)]);
      }
      table_ = std::move(t);
      --n_;
      side_ = small;
      changed = true;
      continue;
    }

    // Smaller support: zero unless every j_i is divisible by p.
    bool inner = true;
    for (std::size_t flat = 0; flat < table_.size() && inner; ++flat) {
      std::int64_t rest = static_cast<std::int64_t>(flat);
      bool divisible = true;
      for (int i = 0; i < d_; ++i) {
        divisible = divisible && (rest % side_) % p == 0;
        rest /= side_;
      }
      if (!divisible && !table_[flat].is_zero_at_precision()) inner = false;
    }
    if (inner) {
      std::vector<CycloElement> t;
      t.reserve(static_cast<std::size_t>(small_total));
      for (std::int64_t f2 = 0; f2 < small_total; ++f2) {
        std::int64_t rest = f2, flat = 0, stride = 1;
        for (int i = 0; i < d_; ++i) {
          flat += (rest % small) * p * stride;
          rest /= small;
          stride *= side_;
        }
        t.push_back(table_[static_cast<std::size_t>(flat)]);
      }
      table_ = std::move(t);
      --m_;
      side_ = small;
      changed = true;
    }
  }
}

nlohmann::json SchwartzFunction::to_json() const {
  nlohmann::json j;
  j["p"] = prime();
  j["N"] = field_->level();
  j["d"] = d_;
  j["m"] = m_;
  j["n"] = n_;
  nlohmann::json t = nlohmann::json::array();
  for (const auto& v : table_) t.push_back(element_to_json(v));
  j["table"] = std::move(t);
  return j;
}

SchwartzFunction indicator(const FieldPtr& field, int d, int k, const Point& offset_in) {
  Point offset = offset_in.empty() ? Point(static_cast<std::size_t>(d), mpq_class(0)) : offset_in;
  if (static_cast<int>(offset.size()) != d) throw std::invalid_argument("indicator: offset has wrong dimension");
  const int p = field->prime();
  std::int64_t voff = min_valuation(offset, p);
  int m = -k;
  if (voff != kInfinite) m = std::max<int>(m, static_cast<int>(-voff));
  const CycloElement one = CycloElement::one(field), zero = CycloElement::zero(field);
  return SchwartzFunction::tabulate(field, d, m, k, [&](const Point& x) {
    for (int i = 0; i < d; ++i) {
      auto ui = static_cast<std::size_t>(i);
      if (rational_valuation(x[ui] - offset[ui], p) < k) return zero;
    }
    return one;
  });
}

// ---------------------------------------------------------------------------
// Heisenberg group and symplectic matrices

namespace {

mpq_class dot(const Point& x, const Point& y) {
  mpq_class s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

Point add(const Point& x, const Point& y) {
  Point z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
  return z;
}

}  // namespace

mpq_class symplectic_form(const Point& a1, const Point& b1, const Point& a2, const Point& b2) {
  return dot(a1, b2) - dot(b1, a2);
}

HeisenbergElement operator*(const HeisenbergElement& x, const HeisenbergElement& y) {
  return {add(x.a, y.a), add(x.b, y.b), x.t + y.t + symplectic_form(x.a, x.b, y.a, y.b) / 2};
}

SymplecticMatrix::SymplecticMatrix(int d, std::vector<mpq_class> entries) : d_(d), e_(std::move(entries)) {
  const int n = 2 * d;
  if (d < 1 || static_cast<int>(e_.size()) != n * n) throw std::invalid_argument("SymplecticMatrix: need 4d^2 entries");
  // g J g^t = J.
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      mpq_class s = 0;
      for (int i = 0; i < d; ++i) s += at(r, i) * at(c, d + i) - at(r, d + i) * at(c, i);
      mpq_class expect = (c == r + d) ? 1 : (r == c + d ? -1 : 0);
      if (s != expect) throw std::invalid_argument("SymplecticMatrix: g J g^t != J");
    }
}

SymplecticMatrix SymplecticMatrix::identity(int d) {
  std::vector<mpq_class> e(static_cast<std::size_t>(4 * d * d), 0);
  for (int i = 0; i < 2 * d; ++i) e[static_cast<std::size_t>(i * 2 * d + i)] = 1;
  return {d, e};
}

SymplecticMatrix SymplecticMatrix::J(int d) {
  std::vector<mpq_class> e(static_cast<std::size_t>(4 * d * d), 0);
  for (int i = 0; i < d; ++i) {
    e[static_cast<std::size_t>(i * 2 * d + d + i)] = 1;
    e[static_cast<std::size_t>((d + i) * 2 * d + i)] = -1;
  }
  return {d, e};
}

SymplecticMatrix SymplecticMatrix::parse(const std::string& text) {
  std::vector<mpq_class> e;
  std::string cur;
  auto flush = [&] {
    std::string t;
    for (char ch : cur)
      if (ch != ' ') t += ch;
    if (t.empty()) throw std::invalid_argument("SymplecticMatrix::parse: empty entry in '" + text + "'");
    mpq_class q(t);
    q.canonicalize();
    e.push_back(q);
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ';') flush();
    else cur += ch;
  }
  flush();
  int n = 0;
  while (n * n < static_cast<int>(e.size())) ++n;
  if (n * n != static_cast<int>(e.size()) || n % 2) throw std::invalid_argument("SymplecticMatrix::parse: not a 2d x 2d matrix");
  return {n / 2, e};
}

const mpq_class& SymplecticMatrix::block(int which, int r, int c) const {
  int ro = (which >= 2) ? d_ : 0, co = (which % 2) ? d_ : 0;
  return at(ro + r, co + c);
}

bool SymplecticMatrix::c_block_zero() const {
  for (int r = 0; r < d_; ++r)
    for (int c = 0; c < d_; ++c)
      if (block(2, r, c) != 0) return false;
  return true;
}

bool SymplecticMatrix::is_J() const { return e_ == J(d_).e_; }

SymplecticMatrix operator*(const SymplecticMatrix& x, const SymplecticMatrix& y) {
  const int n = 2 * x.d_;
  std::vector<mpq_class> e(static_cast<std::size_t>(n * n), 0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      for (int k = 0; k < n; ++k) e[static_cast<std::size_t>(r * n + c)] += x.at(r, k) * y.at(k, c);
  return {x.d_, e};
}

HeisenbergElement act(const HeisenbergElement& h, const SymplecticMatrix& g) {
  const int d = g.dimension();
  Point w;
  w.insert(w.end(), h.a.begin(), h.a.end());
  w.insert(w.end(), h.b.begin(), h.b.end());
  if (static_cast<int>(w.size()) != 2 * d) throw std::invalid_argument("act: dimension mismatch");
  Point out(static_cast<std::size_t>(2 * d), mpq_class(0));
  for (int c = 0; c < 2 * d; ++c)
    for (int k = 0; k < 2 * d; ++k) out[static_cast<std::size_t>(c)] += w[static_cast<std::size_t>(k)] * g.at(k, c);
  return {Point(out.begin(), out.begin() + d), Point(out.begin() + d, out.end()), h.t};
}

// ---------------------------------------------------------------------------
// Operators

SchwartzFunction heisenberg_act(const HeisenbergElement& h, const SchwartzFunction& f, const AdditiveCharacter& psi) {
  const int d = f.dimension(), p = f.prime();
  if (static_cast<int>(h.a.size()) != d || static_cast<int>(h.b.size()) != d)
    throw std::invalid_argument("heisenberg_act: dimension mismatch");
  if (f.is_zero()) return f;
  const std::int64_t va = min_valuation(h.a, p), vb = min_valuation(h.b, p);
  int m = f.support_exponent(), n = f.level_exponent();
  if (va != kInfinite) m = std::max<int>(m, static_cast<int>(-va));
  if (vb != kInfinite) n = std::max<int>(n, static_cast<int>(-vb));
  CharacterValues chi(f.field_ptr(), psi);
  const mpq_class base = h.t + dot(h.a, h.b) / 2;
  return SchwartzFunction::tabulate(f.field_ptr(), d, m, n, [&](const Point& x) {
    CycloElement fx = f(add(x, h.a));
    if (fx.is_zero_at_precision()) return fx;
    return chi(base + dot(h.b, x)) * fx;
  });
}

SchwartzFunction fourier(const SchwartzFunction& f, const AdditiveCharacter& psi) {
  const FieldPtr& F = f.field_ptr();
  const int d = f.dimension(), p = f.prime();
  if (f.is_zero()) return f;
  CharacterValues chi(F, psi);
  const std::int64_t gamma = rational_valuation(psi.conductor, p);
  const int m = f.support_exponent(), n = f.level_exponent();
  const int m_out = n + static_cast<int>(gamma), n_out = m - static_cast<int>(gamma);
  const int K = m + n;
  if (K > F->level() && K > 0) {
    // Only a problem if some exponent is actually nonzero, which is the
    // case as soon as K >= 1 and f is nonzero.
    throw InsufficientField(K, "fourier: needs zeta_{p^" + std::to_string(K) + "}");
  }
  const std::int64_t side = f.side();
  const mpz_class order(static_cast<long>(F->root_order()));
  // psi(c x t) = zeta_{p^K}^{u i.j} with c = u p^gamma.
  const mpq_class u = psi.conductor / pow_p(p, static_cast<int>(gamma));
  const std::int64_t ubar = residue(u, side);
  const mpz_class lift = ipow(p, F->level() - K);
  std::int64_t total = static_cast<std::int64_t>(f.table().size());
  std::vector<std::vector<std::int64_t>> coords(static_cast<std::size_t>(total), std::vector<std::int64_t>(static_cast<std::size_t>(d)));
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t rest = flat;
    for (int i = 0; i < d; ++i) {
      coords[static_cast<std::size_t>(flat)][static_cast<std::size_t>(i)] = rest % side;
      rest /= side;
    }
  }
  std::vector<CycloElement> out;
  out.reserve(static_cast<std::size_t>(total));
  RootSum acc(f.field_ptr(), chi);
  for (std::int64_t io = 0; io < total; ++io) {
    const auto& ci = coords[static_cast<std::size_t>(io)];
    for (std::int64_t jf = 0; jf < total; ++jf) {
      const CycloElement& v = f.table()[static_cast<std::size_t>(jf)];
      if (v.is_zero_at_precision()) continue;
      const auto& cj = coords[static_cast<std::size_t>(jf)];
      __int128 s = 0;
      for (int k = 0; k < d; ++k) s += static_cast<__int128>(ci[static_cast<std::size_t>(k)]) * cj[static_cast<std::size_t>(k)] % side;
      std::int64_t r = static_cast<std::int64_t>((s % side) * ubar % side);
      mpz_class e = mpz_class(static_cast<long>(r)) * lift;
      acc.add(e, v);
    }
    out.push_back(acc.total().scaled_by_p(-static_cast<std::int64_t>(n) * d));
  }
  return SchwartzFunction::from_table(F, d, m_out, n_out, std::move(out));
}

namespace {

std::vector<mpq_class> block_entries(const SymplecticMatrix& g, int which) {
  std::vector<mpq_class> v;
  for (int r = 0; r < g.dimension(); ++r)
    for (int c = 0; c < g.dimension(); ++c) v.push_back(g.block(which, r, c));
  return v;
}

// Inverse of a d x d rational matrix (row-major); throws if singular.
std::vector<mpq_class> invert_matrix(std::vector<mpq_class> a, int d) {
  std::vector<mpq_class> inv(static_cast<std::size_t>(d * d), 0);
  for (int i = 0; i < d; ++i) inv[static_cast<std::size_t>(i * d + i)] = 1;
  auto A = [&](int r, int c) -> mpq_class& { return a[static_cast<std::size_t>(r * d + c)]; };
  auto I = [&](int r, int c) -> mpq_class& { return inv[static_cast<std::size_t>(r * d + c)]; };
  for (int col = 0; col < d; ++col) {
    int piv = col;
    while (piv < d && A(piv, col) == 0) ++piv;
    if (piv == d) throw std::invalid_argument("singular block");
    for (int c = 0; c < d; ++c) {
      std::swap(A(col, c), A(piv, c));
      std::swap(I(col, c), I(piv, c));
    }
    mpq_class s = A(col, col);
    for (int c = 0; c < d; ++c) {
      A(col, c) /= s;
      I(col, c) /= s;
    }
    for (int r = 0; r < d; ++r) {
      if (r == col || A(r, col) == 0) continue;
      mpq_class f = A(r, col);
      for (int c = 0; c < d; ++c) {
        A(r, c) -= f * A(col, c);
        I(r, c) -= f * I(col, c);
      }
    }
  }
  return inv;
}

Point row_times(const Point& x, const std::vector<mpq_class>& M, int d) {
  Point y(static_cast<std::size_t>(d), mpq_class(0));
  for (int c = 0; c < d; ++c)
    for (int k = 0; k < d; ++k) y[static_cast<std::size_t>(c)] += x[static_cast<std::size_t>(k)] * M[static_cast<std::size_t>(k * d + c)];
  return y;
}

// c = 0: T f(x) = psi((xa).(xb)/2) f(xa).
SchwartzFunction intertwine_parabolic(const SymplecticMatrix& g, const SchwartzFunction& f, const AdditiveCharacter& psi,
                                      const IntertwineOptions& opt) {
  const int d = g.dimension(), p = f.prime();
  auto A = block_entries(g, 0), B = block_entries(g, 1);
  auto Ainv = invert_matrix(A, d);
  // S = A B^t, the Gram matrix of the quadratic phase.
  std::vector<mpq_class> S(static_cast<std::size_t>(d * d), 0);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      for (int k = 0; k < d; ++k) S[static_cast<std::size_t>(r * d + c)] += A[static_cast<std::size_t>(r * d + k)] * B[static_cast<std::size_t>(c * d + k)];
  const std::int64_t vAinv = min_valuation(Ainv, p), vA = min_valuation(A, p), vS = min_valuation(S, p);
  const std::int64_t vhalf = rational_valuation(mpq_class(1, 2), p);
  std::int64_t m_out = f.support_exponent() - vAinv;
  std::int64_t n_out = f.level_exponent() - vA;
  if (vS != kInfinite) n_out = std::max({n_out, m_out - vS, ceil_half(-vhalf - vS)});
  check_window(opt.window_cap, {m_out, n_out});
  CharacterValues chi(f.field_ptr(), psi);
  return SchwartzFunction::tabulate(f.field_ptr(), d, static_cast<int>(m_out), static_cast<int>(n_out), [&](const Point& x) {
    Point xa = row_times(x, A, d);
    CycloElement fx = f(xa);
    if (fx.is_zero_at_precision() || vS == kInfinite) return fx;
    Point xb = row_times(x, B, d);
    return chi(dot(xa, xb) / 2) * fx;
  });
}

// d = 1, c != 0.
SchwartzFunction intertwine_big_cell(const SymplecticMatrix& g, const SchwartzFunction& f, const AdditiveCharacter& psi,
                                     const IntertwineOptions& opt) {
  const int p = f.prime();
  const mpq_class a = g.at(0, 0), c = g.at(1, 0), dd = g.at(1, 1);
  const mpq_class ac = a / c, dc = dd / c;
  const std::int64_t vc = rational_valuation(c, p), vhalf = rational_valuation(mpq_class(1, 2), p);
  const std::int64_t vac = rational_valuation(ac, p), vdc = rational_valuation(dc, p);
  const std::int64_t m = f.support_exponent(), n = f.level_exponent();

  // h(y) = psi(d y^2 / 2c) f(y) has support p^{-m} and level n1.
  std::int64_t n1 = n;
  if (vdc != kInfinite) n1 = std::max({n1, m - vdc, ceil_half(-vhalf - vdc)});
  const std::int64_t m_out = n1 - vc;
  std::int64_t n_out = m + vc;
  if (vac != kInfinite) n_out = std::max({n_out, m_out - vac, ceil_half(-vhalf - vac)});
  const std::int64_t L = std::max(n1, m_out + vc);
  check_window(opt.window_cap, {m, m_out, n_out, L});

  const FieldPtr& F = f.field_ptr();
  CharacterValues chi(F, psi);
  const std::int64_t count = ipow64(p, static_cast<int>(m + L));
  const mpq_class y_scale = pow_p(p, static_cast<int>(-m));
  std::vector<mpq_class> ys;
  std::vector<const CycloElement*> fy;
  for (std::int64_t j = 0; j < count; ++j) {
    const CycloElement& v = f.table()[static_cast<std::size_t>(j % f.side())];
    if (v.is_zero_at_precision()) continue;
    ys.push_back(mpq_class(static_cast<long>(j)) * y_scale);
    fy.push_back(&v);
  }
  const mpq_class half_ac = ac / 2, half_dc = dc / 2, inv_c = mpq_class(1) / c;
  RootSum acc(F, chi);
  return SchwartzFunction::tabulate(F, 1, static_cast<int>(m_out), static_cast<int>(n_out), [&](const Point& xp) {
    const mpq_class& x = xp[0];
    const mpq_class qx = half_ac * x * x, lin = x * inv_c;
    for (std::size_t k = 0; k < ys.size(); ++k) {
      const mpq_class& y = ys[k];
      mpq_class phase = qx - lin * y + half_dc * y * y;
      acc.add(exponent_in_field(psi, phase, *F) % F->root_order(), *fy[k]);
    }
    return acc.total().scaled_by_p(-L);
  });
}

}  // namespace

SchwartzFunction intertwine(const SymplecticMatrix& g, const SchwartzFunction& f, const AdditiveCharacter& psi,
                           const IntertwineOptions& opt) {
  if (g.dimension() != f.dimension()) throw std::invalid_argument("intertwine: dimension mismatch");
  if (f.is_zero()) return f;
  if (g.c_block_zero()) return intertwine_parabolic(g, f, psi, opt);
  if (g.dimension() == 1) return intertwine_big_cell(g, f, psi, opt);
  if (g.is_J()) {
    check_window(opt.window_cap, {f.support_exponent(), f.level_exponent()});
    return fourier(f, psi);
  }
  throw UnsupportedOperation("intertwine: for d > 1 only c = 0 and g = J are supported");
}

SchwartzFunction intertwine_sl2(const SymplecticMatrix& g, const SchwartzFunction& f, const AdditiveCharacter& psi,
                                const IntertwineOptions& opt) {
  if (g.dimension() != 1) throw std::invalid_argument("intertwine_sl2: d must be 1");
  return intertwine(g, f, psi, opt);
}

bool check_intertwining(const SymplecticMatrix& g, const HeisenbergElement& h, const SchwartzFunction& f,
                        const AdditiveCharacter& psi, const IntertwineOptions& opt) {
  SchwartzFunction lhs = heisenberg_act(h, intertwine(g, f, psi, opt), psi);
  SchwartzFunction rhs = intertwine(g, heisenberg_act(act(h, g), f, psi), psi, opt);
  return lhs.equals(rhs);
}

Valuation sup_norm(const SchwartzFunction& f) {
  std::optional<Valuation> best;
  for (const auto& v : f.table()) {
    Valuation w = v.valuation();
    best = best ? min(*best, w) : w;
  }
  return *best;
}

GrowthWitness norm_growth_family(const SymplecticMatrix& g, int n, const FieldPtr& field, const AdditiveCharacter& psi,
                                 const IntertwineOptions& opt) {
  if (g.c_block_zero()) throw std::invalid_argument("norm_growth_family: needs c != 0");
  const int d = g.dimension();
  SchwartzFunction fn = indicator(field, d, n);
  SchwartzFunction img = intertwine(g, fn, psi, opt);
  return {n, img(Point(static_cast<std::size_t>(d), mpq_class(0))).valuation(), sup_norm(img), sup_norm(fn)};
}

}  // namespace cyclopadic
