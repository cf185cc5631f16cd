#pragma once
// Point counts over prime fields by plain integer arithmetic, no library types.

#include <cstdint>

namespace oracle {

inline long md(long v, long p) { return ((v % p) + p) % p; }

/// Projective points of y² + a1xy + a3y = x³ + a2x² + a4x + a6 over F_p, by double enumeration.
inline long weierstrass_count(long p, long a1, long a2, long a3, long a4, long a6) {
  long n = 1;
  for (long x = 0; x < p; ++x)
    for (long y = 0; y < p; ++y)
      if (md(y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6), p) == 0) ++n;
  return n;
}

/// Legendre symbol by Euler's criterion.
inline long legendre(long a, long p) {
  a = md(a, p);
  if (a == 0) return 0;
  long r = 1, b = a, e = (p - 1) / 2;
  for (; e; e >>= 1, b = b * b % p)
    if (e & 1) r = r * b % p;
  return r == 1 ? 1 : -1;
}

/// p + 1 + Σ_x (f(x)/p) for y² = x³ + a2x² + a4x + a6, p odd.
inline long character_sum_count(long p, long a2, long a4, long a6) {
  long n = p + 1;
  for (long x = 0; x < p; ++x) n += legendre(x * x * x + a2 * x * x + a4 * x + a6, p);
  return n;
}

}  // namespace oracle
