#pragma once

#include <cstdint>
#include <string>

#include "modlie/error.hpp"

namespace modlie {

using Coeff = std::int64_t;

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Coefficient arithmetic: residues mod p for p > 0, checked 64-bit integers for p = 0.
/// Residues are kept in [0, p).
struct Field {
  std::int64_t p = 0;

  bool modular() const { return p != 0; }

  Coeff reduce(std::int64_t v) const {
    if (!p) return v;
    v %= p;
    return v < 0 ? v + p : v;
  }

  Coeff add(Coeff a, Coeff b) const {
    if (p) {
      Coeff s = a + b;
      return s >= p ? s - p : s;
    }
    Coeff r;
    if (__builtin_add_overflow(a, b, &r)) throw Error(Errc::CoefficientOverflow, "integer addition");
    return r;
  }

  Coeff neg(Coeff a) const {
    if (p) return a == 0 ? 0 : p - a;
    if (a == INT64_MIN) throw Error(Errc::CoefficientOverflow, "integer negation");
    return -a;
  }

  Coeff sub(Coeff a, Coeff b) const { return add(a, neg(b)); }

  Coeff mul(Coeff a, Coeff b) const {
    if (p) return static_cast<Coeff>((static_cast<__int128>(a) * b) % p);
    Coeff r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error(Errc::CoefficientOverflow, "integer product");
    return r;
  }

  Coeff pow(Coeff base, std::uint64_t e) const {
    Coeff r = reduce(1);
    Coeff b = reduce(base);
    while (e) {
      if (e & 1) r = mul(r, b);
      e >>= 1;
      if (e) b = mul(b, b);
    }
    return r;
  }

  Coeff inv(Coeff a) const {
    if (!p) {
      if (a == 1 || a == -1) return a;
      throw Error(Errc::NotModP, "division in integer mode");
    }
    a = reduce(a);
    if (a == 0) throw Error(Errc::Internal, "inverse of zero");
    std::int64_t t = 0, nt = 1, r = p, nr = a;
    while (nr) {
      std::int64_t q = r / nr;
      std::int64_t tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    return reduce(t);
  }

  /// Representative in (-p/2, p/2] for display.
  std::int64_t balanced(Coeff a) const {
    if (!p) return a;
    return a > p / 2 ? a - p : a;
  }
};

}  // namespace modlie
