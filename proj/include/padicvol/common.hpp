#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace padicvol {

using Rational = mpq_class;
using Integer = mpz_class;

/// Raised when an operation's precondition is violated by its input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an enumeration would exceed the configured cell budget.
class GuardError : public Error {
 public:
  using Error::Error;
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

/// Returns (p, r) with q = p^r, or throws if q is not a prime power.
inline std::pair<std::uint64_t, unsigned> prime_power(std::uint64_t q) {
  auto f = prime_factors(q);
  if (f.size() != 1) throw Error("not a prime power: " + std::to_string(q));
  unsigned r = 0;
  for (std::uint64_t x = q; x > 1; x /= f[0]) ++r;
  return {f[0], r};
}

inline long floor_mod(long a, long n) {
  long m = a % n;
  return m < 0 ? m + n : m;
}

/// Fractional part of a rational, in [0, 1).
inline Rational frac(const Rational& x) {
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rational r = x - Rational(fl);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& x) {
  return x.get_den() == 1 ? x.get_num().get_str() : x.get_str();
}

inline Rational parse_rational(const std::string& s) {
  try {
    Rational r(s);
    if (r.get_den() == 0) throw Error("zero denominator: " + s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw Error("malformed rational: " + s);
  }
}

}  // namespace padicvol
