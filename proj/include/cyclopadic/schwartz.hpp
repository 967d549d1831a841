#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "cyclopadic/cyclotomic.hpp"
#include "cyclopadic/valuation.hpp"

namespace cyclopadic {

using Point = std::vector<mpq_class>;

// v_p of a rational; +infinity (INT64_MAX) for zero.
std::int64_t rational_valuation(const mpq_class& x, int p);

// x -> psi(c x), with psi(a / p^k) = zeta_{p^k}^a and kernel Z_p.
struct AdditiveCharacter {
  int p = 2;
  mpq_class conductor = 1;

  // Level k and exponent a with psi(c x) = zeta_{p^k}^a, 0 <= a < p^k.
  std::pair<int, mpz_class> root(const mpq_class& x) const;
};

// Values of a character inside a fixed field, with a cache of roots of
// unity. Throws InsufficientField when a value needs zeta_{p^k}, k > N.
class CharacterValues {
 public:
  CharacterValues(FieldPtr field, AdditiveCharacter psi);

  CycloElement operator()(const mpq_class& x);
  // zeta_{p^k}^a.
  CycloElement root_of_unity(int k, const mpz_class& a);
  const AdditiveCharacter& character() const noexcept { return psi_; }

 private:
  FieldPtr field_;
  AdditiveCharacter psi_;
  std::unordered_map<std::int64_t, CycloElement> cache_;
};

// Locally constant, compactly supported function on Q_p^d: supported in
// p^{-m} Z_p^d and invariant under p^n Z_p^d, stored as one value per coset
// of p^n Z_p^d in p^{-m} Z_p^d. The coset with index j = (j_1..j_d),
// 0 <= j_i < p^{m+n}, has representative p^{-m} j; flat index
// sum_i j_i p^{(m+n) i}.
//
// Construction always canonicalizes: (m, n) is made minimal, and the zero
// function is (0, 0, [0]).
class SchwartzFunction {
 public:
  static SchwartzFunction zero(FieldPtr field, int d);
  static SchwartzFunction from_table(FieldPtr field, int d, int m, int n, std::vector<CycloElement> table);
  // Tabulates `value` on coset representatives of the (m, n) lattice.
  static SchwartzFunction tabulate(FieldPtr field, int d, int m, int n,
                                   const std::function<CycloElement(const Point&)>& value);

  const FieldPtr& field_ptr() const noexcept { return field_; }
  int prime() const noexcept { return field_->prime(); }
  int dimension() const noexcept { return d_; }
  int support_exponent() const noexcept { return m_; }
  int level_exponent() const noexcept { return n_; }
  const std::vector<CycloElement>& table() const noexcept { return table_; }
  // p^{m+n}.
  std::int64_t side() const noexcept { return side_; }

  CycloElement operator()(const Point& x) const;
  // Coset representative p^{-m} j for a flat index.
  Point point(std::int64_t flat) const;

  // Values on the finer (m', n') lattice, m' >= m, n' >= n.
  std::vector<CycloElement> refined(int m2, int n2) const;
  // Equal on every coset, at precision.
  bool equals(const SchwartzFunction& o) const;
  bool is_zero() const;

  nlohmann::json to_json() const;

 private:
  SchwartzFunction(FieldPtr field, int d, int m, int n, std::vector<CycloElement> table, bool shape_only = false);
  void canonicalize();

  FieldPtr field_;
  int d_;
  int m_;
  int n_;
  std::int64_t side_;
  std::vector<CycloElement> table_;
};

// Characteristic function of p^k Z_p^d + offset.
SchwartzFunction indicator(const FieldPtr& field, int d, int k, const Point& offset = {});

// [w, t] with w = (a, b) in Q_p^d x Q_p^d.
struct HeisenbergElement {
  Point a;
  Point b;
  mpq_class t;

  friend HeisenbergElement operator*(const HeisenbergElement& x, const HeisenbergElement& y);
};

mpq_class symplectic_form(const Point& a1, const Point& b1, const Point& a2, const Point& b2);

// 2d x 2d matrix (a b; c d) acting on row vectors from the right.
class SymplecticMatrix {
 public:
  // Throws std::invalid_argument unless g J g^t = J.
  SymplecticMatrix(int d, std::vector<mpq_class> entries);
  static SymplecticMatrix identity(int d);
  static SymplecticMatrix J(int d);
  // "a,b;c,d" for d = 1 (rows separated by ';').
  static SymplecticMatrix parse(const std::string& text);

  int dimension() const noexcept { return d_; }
  const mpq_class& at(int r, int c) const { return e_[static_cast<std::size_t>(r * 2 * d_ + c)]; }
  // Block entry: block 0 = a, 1 = b, 2 = c, 3 = d.
  const mpq_class& block(int which, int r, int c) const;
  bool c_block_zero() const;
  bool is_J() const;

  friend SymplecticMatrix operator*(const SymplecticMatrix& x, const SymplecticMatrix& y);

 private:
  int d_;
  std::vector<mpq_class> e_;
};

// [w, t] . g = [w g, t].
HeisenbergElement act(const HeisenbergElement& h, const SymplecticMatrix& g);

// (rho([a, b, t]) f)(x) = psi(t + a.b/2 + b.x) f(x + a).
SchwartzFunction heisenberg_act(const HeisenbergElement& h, const SchwartzFunction& f, const AdditiveCharacter& psi);

// F f(x) = integral of psi(x.t) f(t) dt, with mu(Z_p^d) = 1.
SchwartzFunction fourier(const SchwartzFunction& f, const AdditiveCharacter& psi);

struct IntertwineOptions {
  // Largest |exponent| allowed for support, level, and integration lattice.
  int window_cap = 12;
};

// Raised when an operator would need lattices beyond the window cap.
class WindowCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Intertwining operator T_g with rho(h) T_g = T_g rho(h . g), in the
// normalization mu(Z_p) = 1. For d = 1 and c != 0:
//   T_g f(x) = integral psi(a x^2/(2c) - x y / c + d y^2/(2c)) f(y) dy;
// for c = 0: T_g f(x) = psi(a b x^2 / 2) f(x a). For d > 1 only c = 0 and
// g = J (where T_J = F) are supported; others throw UnsupportedOperation.
SchwartzFunction intertwine(const SymplecticMatrix& g, const SchwartzFunction& f, const AdditiveCharacter& psi,
                            const IntertwineOptions& opt = {});
SchwartzFunction intertwine_sl2(const SymplecticMatrix& g, const SchwartzFunction& f, const AdditiveCharacter& psi,
                                const IntertwineOptions& opt = {});

// rho(h)(T_g f) == T_g(rho(h . g) f).
bool check_intertwining(const SymplecticMatrix& g, const HeisenbergElement& h, const SchwartzFunction& f,
                        const AdditiveCharacter& psi, const IntertwineOptions& opt = {});

// -log_p of the sup norm: the least valuation among the values.
Valuation sup_norm(const SchwartzFunction& f);

struct GrowthWitness {
  int n;
  // v(T_g(f_n)(0)) and -log_p of sup norms of T_g(f_n) and f_n.
  Valuation value_at_zero;
  Valuation image_sup_norm;
  Valuation source_sup_norm;
};

// f_n = indicator of p^n Z_p^d, mapped through T_g (c != 0).
GrowthWitness norm_growth_family(const SymplecticMatrix& g, int n, const FieldPtr& field, const AdditiveCharacter& psi,
                                 const IntertwineOptions& opt = {});

}  // namespace cyclopadic
