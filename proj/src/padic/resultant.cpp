#include "cyclopadic/resultant.hpp"

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "cyclopadic/errors.hpp"

namespace cyclopadic {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct Modulus {
  u64 p;
  int k;
  u64 m;  // p^k

  u64 mul(u64 a, u64 b) const { return static_cast<u64>((static_cast<u128>(a) * b) % m); }
  u64 add(u64 a, u64 b) const {
    u64 s = a + b;
    return s >= m ? s - m : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + m - b; }
  int val(u64 a) const {
    if (a == 0) return k;
    int v = 0;
    while (a % p == 0) {
      a /= p;
      ++v;
    }
    return v;
  }
};

u64 inverse_mod(u64 a, u64 m) {
  // Extended Euclid on signed 128-bit values.
  __int128 r0 = m, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    __int128 q = r0 / r1;
    std::swap(r0, r1);
    r1 -= q * r0;
    std::swap(s0, s1);
    s1 -= q * s0;
  }
  __int128 res = s0 % static_cast<__int128>(m);
  if (res < 0) res += m;
  return static_cast<u64>(res);
}

// Coefficients of Phi_{p^N}(T + 1) modulo md.m, from Pascal's triangle.
std::vector<u64> eisenstein_mod(int p, int N, const Modulus& md) {
  u64 step = 1;
  for (int i = 1; i < N; ++i) step *= static_cast<u64>(p);
  u64 top = step * static_cast<u64>(p - 1);
  std::vector<u64> E(top + 1, 0);
  std::vector<u64> row{1};
  for (u64 n = 0;; ++n) {
    if (n % step == 0) {
      for (u64 i = 0; i <= n; ++i) E[i] = md.add(E[i], row[i]);
      if (n == top) break;
    }
    std::vector<u64> next(row.size() + 1, 0);
    next[0] = 1;
    for (std::size_t i = 1; i < row.size(); ++i) next[i] = md.add(row[i - 1], row[i]);
    next[row.size()] = 1;
    row = std::move(next);
  }
  return E;
}

// v_p(det) of the multiplication matrix at modulus p^k, or -1 if the
// elimination meets an all-zero block.
int det_valuation(const std::vector<u64>& a, const std::vector<u64>& E, const Modulus& md) {
  const std::size_t e = a.size();
  // Column j holds the coordinates of pi^j * A(pi).
  std::vector<std::vector<u64>> M(e, std::vector<u64>(e, 0));
  std::vector<u64> col = a;
  for (std::size_t j = 0; j < e; ++j) {
    for (std::size_t i = 0; i < e; ++i) M[i][j] = col[i];
    // col <- pi * col, reducing pi^e = -sum E_i pi^i.
    u64 topc = col[e - 1];
    for (std::size_t i = e - 1; i >= 1; --i) col[i] = col[i - 1];
    col[0] = 0;
    for (std::size_t i = 0; i < e; ++i) col[i] = md.sub(col[i], md.mul(topc, E[i]));
  }

  int total = 0;
  std::vector<std::size_t> rows(e), cols(e);
  for (std::size_t i = 0; i < e; ++i) rows[i] = cols[i] = i;
  for (std::size_t step = 0; step < e; ++step) {
    int best = md.k;
    std::size_t br = step, bc = step;
    for (std::size_t r = step; r < e && best > 0; ++r) {
      for (std::size_t c = step; c < e; ++c) {
        u64 x = M[rows[r]][cols[c]];
        if (x == 0) continue;
        int v = md.val(x);
        if (v < best) {
          best = v;
          br = r;
          bc = c;
          if (v == 0) break;
        }
      }
    }
    if (best >= md.k) return -1;
    total += best;
    std::swap(rows[step], rows[br]);
    std::swap(cols[step], cols[bc]);
    const auto& prow = M[rows[step]];
    u64 pv = 1;
    for (int i = 0; i < best; ++i) pv *= md.p;
    u64 unit_inv = inverse_mod((prow[cols[step]] / pv) % md.m, md.m);
    // Pivot row divided by p^best; exact on representatives since every
    // remaining entry has valuation >= best.
    std::vector<u64> scaled(e, 0);
    for (std::size_t c = step + 1; c < e; ++c) scaled[cols[c]] = md.mul(prow[cols[c]] / pv, unit_inv);
    for (std::size_t r = step + 1; r < e; ++r) {
      auto& row = M[rows[r]];
      u64 f = row[cols[step]];
      if (f == 0) continue;
      for (std::size_t c = step + 1; c < e; ++c) row[cols[c]] = md.sub(row[cols[c]], md.mul(f, scaled[cols[c]]));
      row[cols[step]] = 0;
    }
  }
  return total;
}

}  // namespace

Valuation valuation_by_resultant(const CycloElement& a) {
  if (a.is_zero_at_precision()) return Valuation::zero_at_precision(Rational(a.shift()));
  const CyclotomicField& F = a.field();
  const int p = F.prime();
  const int e = F.degree();

  int kmax = 0;
  {
    u128 m = 1;
    while (m * static_cast<u128>(p) < (static_cast<u128>(1) << 62)) {
      m *= static_cast<u128>(p);
      ++kmax;
    }
  }
  kmax = std::min(kmax, a.relative_precision());

  // Start with few digits; most inputs are decided immediately.
  for (int k = std::min(kmax, 8);; k = std::min(kmax, 4 * k)) {
    Modulus md{static_cast<u64>(p), k, 1};
    for (int i = 0; i < k; ++i) md.m *= static_cast<u64>(p);
    std::vector<u64> coeffs(static_cast<std::size_t>(e));
    for (int i = 0; i < e; ++i) {
      mpz_class r;
      mpz_fdiv_r_ui(r.get_mpz_t(), a.coefficients()[static_cast<std::size_t>(i)].get_mpz_t(), md.m);
      coeffs[static_cast<std::size_t>(i)] = r.get_ui();
    }
    int v = det_valuation(coeffs, eisenstein_mod(p, F.level(), md), md);
    if (v >= 0) return Valuation::finite(Rational(a.shift()) + Rational(v, e));
    if (k == kmax) break;
  }
  throw InsufficientPrecision("valuation_by_resultant: elimination exhausted " + std::to_string(kmax) +
                              " digits of precision");
}

}  // namespace cyclopadic
