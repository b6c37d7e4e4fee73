#pragma once

// Dense univariate polynomials over a prime field. Coefficients are stored in
// ascending degree order and kept reduced. Factorization works by trial
// division against monic polynomials enumerated in (degree, lexicographic)
// order, which is exact and fast enough for the degrees this library meets
// (module dimensions stay below ~32 and characteristics stay small).

#include <vector>

#include "regorb/fp.hpp"

namespace regorb {

struct FpPoly {
  i64 p = 2;
  std::vector<i64> c;  // ascending; empty means the zero polynomial

  FpPoly() = default;
  FpPoly(i64 p_, std::vector<i64> coeffs) : p(p_), c(std::move(coeffs)) {
    for (auto& x : c) x = fp_reduce(x, p);
    trim();
  }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  i64 lead() const { return c.empty() ? 0 : c.back(); }
  i64 coeff(int i) const { return (i >= 0 && i < (int)c.size()) ? c[i] : 0; }

  static FpPoly zero(i64 p) { return FpPoly(p, {}); }
  static FpPoly one(i64 p) { return FpPoly(p, {1}); }
  static FpPoly x(i64 p) { return FpPoly(p, {0, 1}); }

  bool operator==(const FpPoly& o) const { return p == o.p && c == o.c; }
};

inline FpPoly poly_add(const FpPoly& a, const FpPoly& b) {
  std::vector<i64> r(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) r[i] = fp_add(a.coeff((int)i), b.coeff((int)i), a.p);
  return FpPoly(a.p, std::move(r));
}

inline FpPoly poly_sub(const FpPoly& a, const FpPoly& b) {
  std::vector<i64> r(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) r[i] = fp_sub(a.coeff((int)i), b.coeff((int)i), a.p);
  return FpPoly(a.p, std::move(r));
}

inline FpPoly poly_mul(const FpPoly& a, const FpPoly& b) {
  if (a.is_zero() || b.is_zero()) return FpPoly::zero(a.p);
  std::vector<i64> r(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j)
      r[i + j] = fp_add(r[i + j], fp_mul(a.c[i], b.c[j], a.p), a.p);
  return FpPoly(a.p, std::move(r));
}

inline FpPoly poly_scale(const FpPoly& a, i64 s) {
  std::vector<i64> r(a.c);
  for (auto& x : r) x = fp_mul(x, s, a.p);
  return FpPoly(a.p, std::move(r));
}

inline FpPoly poly_monic(const FpPoly& a) {
  if (a.is_zero()) return a;
  return poly_scale(a, field_inverse(a.lead(), a.p));
}

// Quotient and remainder; divisor must be nonzero.
inline std::pair<FpPoly, FpPoly> poly_divmod(const FpPoly& a, const FpPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  FpPoly rem = a;
  if (rem.degree() < b.degree()) return {FpPoly::zero(a.p), rem};
  std::vector<i64> q(rem.degree() - b.degree() + 1, 0);
  i64 inv_lead = field_inverse(b.lead(), b.p);
  while (!rem.is_zero() && rem.degree() >= b.degree()) {
    int shift = rem.degree() - b.degree();
    i64 factor = fp_mul(rem.lead(), inv_lead, b.p);
    q[shift] = factor;
    for (int i = 0; i <= b.degree(); ++i)
      rem.c[i + shift] = fp_sub(rem.c[i + shift], fp_mul(factor, b.c[i], b.p), b.p);
    rem.trim();
  }
  return {FpPoly(a.p, std::move(q)), rem};
}

inline FpPoly poly_mod(const FpPoly& a, const FpPoly& b) { return poly_divmod(a, b).second; }

inline bool poly_divides(const FpPoly& d, const FpPoly& a) {
  return poly_mod(a, d).is_zero();
}

inline FpPoly poly_gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly r = poly_mod(a, b);
    a = b;
    b = r;
  }
  return poly_monic(a);
}

inline FpPoly poly_lcm(const FpPoly& a, const FpPoly& b) {
  if (a.is_zero() || b.is_zero()) return FpPoly::zero(a.p);
  FpPoly g = poly_gcd(a, b);
  return poly_monic(poly_divmod(poly_mul(a, b), g).first);
}

inline i64 poly_eval(const FpPoly& a, i64 x) {
  i64 r = 0;
  for (int i = a.degree(); i >= 0; --i) r = fp_add(fp_mul(r, x, a.p), a.c[i], a.p);
  return r;
}

// All roots in F_p, ascending. Fine while p stays in the few-thousands range.
inline std::vector<i64> poly_roots(const FpPoly& a) {
  std::vector<i64> roots;
  for (i64 x = 0; x < a.p; ++x)
    if (poly_eval(a, x) == 0) roots.push_back(x);
  return roots;
}

namespace detail {

// Enumerates monic degree-d polynomials in lexicographic order of the
// coefficient vector (constant coefficient least significant).
inline bool next_monic(std::vector<i64>& coeffs, i64 p) {
  for (size_t i = 0; i + 1 < coeffs.size(); ++i) {
    if (++coeffs[i] < p) return true;
    coeffs[i] = 0;
  }
  return false;
}

}  // namespace detail

// Irreducible factors with multiplicities, ordered by (degree, lex). The first
// monic divisor found in this order is necessarily irreducible, since any
// proper factor of it would have been found earlier.
inline std::vector<std::pair<FpPoly, int>> poly_factor(FpPoly f) {
  if (f.is_zero()) throw DomainError("cannot factor the zero polynomial");
  f = poly_monic(f);
  std::vector<std::pair<FpPoly, int>> factors;
  constexpr i64 kEnumCap = 1 << 22;
  while (f.degree() > 0) {
    FpPoly found = f;  // f itself is irreducible if no smaller divisor exists
    bool split = false;
    for (int d = 1; d <= f.degree() / 2 && !split; ++d) {
      i64 count = 1;
      for (int i = 0; i < d; ++i) {
        count *= f.p;
        if (count > kEnumCap) throw CapError("polynomial factorization enumeration cap exceeded");
      }
      std::vector<i64> coeffs(d + 1, 0);
      coeffs[d] = 1;
      do {
        FpPoly cand(f.p, coeffs);
        if (poly_divides(cand, f)) {
          found = cand;
          split = true;
          break;
        }
      } while (detail::next_monic(coeffs, f.p));
    }
    int mult = 0;
    while (poly_divides(found, f)) {
      f = poly_divmod(f, found).first;
      ++mult;
    }
    factors.push_back({found, mult});
  }
  return factors;
}

inline bool poly_is_irreducible(const FpPoly& f) {
  if (f.degree() <= 0) return false;
  auto fac = poly_factor(f);
  return fac.size() == 1 && fac[0].second == 1;
}

}  // namespace regorb
