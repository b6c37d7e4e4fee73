#pragma once

// Scalar arithmetic in prime fields F_p, plus the error taxonomy shared by the
// whole library. Two kinds of fields occur: the coefficient field of a module
// (small characteristic p) and the auxiliary field used while building
// character tables (a prime q chosen per group). Both are plain prime fields;
// the role tag only documents intent.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace regorb {

using i64 = long long;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input: non-prime characteristic, singular generator, bad schema.
struct DomainError : Error {
  using Error::Error;
};

// A documented size or scan cap was exceeded.
struct CapError : Error {
  using Error::Error;
};

// A mathematical hypothesis required by an operation does not hold.
struct HypothesisError : Error {
  using Error::Error;
};

// An invariant the implementation itself must maintain failed; always a bug.
struct InternalError : Error {
  using Error::Error;
};

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

enum class FieldRole { module_field, table_field };

struct FieldSpec {
  i64 p;
  FieldRole role;
  explicit FieldSpec(i64 p_, FieldRole role_ = FieldRole::module_field)
      : p(p_), role(role_) {
    if (!is_prime(p)) throw DomainError("field characteristic " + std::to_string(p) + " is not prime");
  }
};

inline i64 fp_reduce(i64 a, i64 p) {
  a %= p;
  return a < 0 ? a + p : a;
}

inline i64 fp_add(i64 a, i64 b, i64 p) { return fp_reduce(a + b, p); }
inline i64 fp_sub(i64 a, i64 b, i64 p) { return fp_reduce(a - b, p); }
inline i64 fp_mul(i64 a, i64 b, i64 p) { return fp_reduce(a * b, p); }
inline i64 fp_neg(i64 a, i64 p) { return fp_reduce(-a, p); }

inline i64 fp_pow(i64 a, i64 e, i64 p) {
  a = fp_reduce(a, p);
  i64 r = 1 % p;
  while (e > 0) {
    if (e & 1) r = fp_mul(r, a, p);
    a = fp_mul(a, a, p);
    e >>= 1;
  }
  return r;
}

// Multiplicative inverse by extended Euclid. Zero input is a caller error.
inline i64 field_inverse(i64 a, i64 p) {
  a = fp_reduce(a, p);
  if (a == 0) throw DomainError("division by zero in F_" + std::to_string(p));
  i64 r0 = p, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    i64 q = r0 / r1;
    i64 r2 = r0 - q * r1;
    i64 s2 = s0 - q * s1;
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
  }
  return fp_reduce(s0, p);
}

inline i64 field_inverse(i64 a, const FieldSpec& f) { return field_inverse(a, f.p); }

inline i64 gcd_i64(i64 a, i64 b) {
  while (b != 0) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

inline i64 lcm_i64(i64 a, i64 b) { return a / gcd_i64(a, b) * b; }

}  // namespace regorb
