#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"

namespace padicvol {

/// Index of a finite-field element: the base-p integer Σ c_i p^i of its coordinates.
using Code = std::uint32_t;

namespace fp {

/// Polynomial over F_p, coefficients low to high, no trailing zeros.
using Poly = std::vector<std::uint32_t>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1, b = b * b % p)
    if (e & 1) r = r * b % p;
  return static_cast<std::uint32_t>(r);
}

inline Poly mod(Poly a, const Poly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t li = inv_mod(m.back(), p);
  while (a.size() > dm) {
    std::uint64_t c = a.back() * li % p;
    std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * m[i]) % p);
    trim(a);
  }
  return a;
}

inline Poly mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint64_t> c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + std::uint64_t(a[i]) * b[j]) % p;
  Poly out(c.begin(), c.end());
  trim(out);
  return out;
}

inline Poly sub(Poly a, const Poly& b, std::uint32_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

inline Poly gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Poly powmod(Poly base, std::uint64_t e, const Poly& m, std::uint32_t p) {
  Poly r{1};
  base = mod(base, m, p);
  for (; e; e >>= 1) {
    if (e & 1) r = mod(mul(r, base, p), m, p);
    base = mod(mul(base, base, p), m, p);
  }
  return r;
}

/// Rabin-style test: f of degree r is irreducible iff gcd(f, x^{p^k} - x) = 1 for k ≤ r/2.
inline bool irreducible(const Poly& f, std::uint32_t p) {
  const std::size_t r = f.size() - 1;
  if (r == 1) return true;
  Poly xk{0, 1};
  for (std::size_t k = 1; k <= r / 2; ++k) {
    xk = powmod(xk, p, f, p);
    Poly g = gcd(f, sub(xk, Poly{0, 1}, p), p);
    if (g.size() > 1) return false;
  }
  return true;
}

}  // namespace fp

/**
 * @brief The finite field F_{p^r} = F_p[a]/(modulus).
 *
 * Elements are handled as Codes. Fields up to 2^22 elements carry log/antilog tables.
 */
class Field {
 public:
  std::uint32_t p = 0;
  std::uint32_t r = 0;
  std::uint64_t q = 0;
  fp::Poly modulus;  ///< monic, degree r, low to high

  Field(std::uint32_t p_, std::uint32_t r_, fp::Poly mod_) : p(p_), r(r_), q(ipow(p_, r_)), modulus(std::move(mod_)) {
    pw_.resize(r + 1);
    pw_[0] = 1;
    for (std::uint32_t i = 1; i <= r; ++i) pw_[i] = pw_[i - 1] * p;
    if (q <= (1u << 22)) build_tables();
  }

  std::size_t size() const { return q; }
  Code zero() const { return 0; }
  Code one() const { return 1; }

  std::vector<std::uint32_t> coords(Code a) const {
    std::vector<std::uint32_t> c(r);
    for (std::uint32_t i = 0; i < r; ++i, a /= p) c[i] = a % p;
    return c;
  }
  Code from_coords(const std::vector<std::uint32_t>& c) const {
    Code a = 0;
    for (std::size_t i = c.size(); i-- > 0;) a = a * p + (c[i] % p);
    return a;
  }
  Code from_int(long v) const { return static_cast<Code>(floor_mod(v, p)); }
  bool in_prime_field(Code a) const { return a < p; }

  Code add(Code a, Code b) const {
    if (r == 1) return (a + b) % p;
    Code out = 0;
    for (std::uint32_t i = 0; i < r; ++i, a /= p, b /= p) out += ((a % p + b % p) % p) * pw_[i];
    return out;
  }
  Code neg(Code a) const {
    if (r == 1) return (p - a) % p;
    Code out = 0;
    for (std::uint32_t i = 0; i < r; ++i, a /= p) out += ((p - a % p) % p) * pw_[i];
    return out;
  }
  Code sub(Code a, Code b) const { return add(a, neg(b)); }

  Code mul(Code a, Code b) const {
    if (a == 0 || b == 0) return 0;
    if (!exp_.empty()) {
      std::uint64_t k = std::uint64_t(log_[a]) + log_[b];
      if (k >= q - 1) k -= q - 1;
      return exp_[k];
    }
    return slow_mul(a, b);
  }
  Code inv(Code a) const {
    if (a == 0) throw Error("division by zero in F_" + std::to_string(q));
    if (!exp_.empty()) return exp_[(q - 1 - log_[a]) % (q - 1)];
    return pow(a, q - 2);
  }
  Code div(Code a, Code b) const { return mul(a, inv(b)); }
  Code pow(Code a, std::int64_t e) const {
    if (e < 0) return pow(inv(a), -e);
    if (a == 0) return e == 0 ? 1 : 0;
    if (!exp_.empty()) return exp_[static_cast<std::uint64_t>((std::uint64_t(log_[a]) * (std::uint64_t(e) % (q - 1))) % (q - 1))];
    Code res = 1;
    for (Code b = a; e; e >>= 1, b = mul(b, b))
      if (e & 1) res = mul(res, b);
    return res;
  }
  /// x ↦ x^{p^k}.
  Code frob(Code a, std::uint32_t k = 1) const {
    for (std::uint32_t i = 0; i < k % r; ++i) a = pow(a, p);
    return a;
  }
  /// Multiplicative order of a nonzero element.
  std::uint64_t order(Code a) const {
    if (a == 0) throw Error("order of zero");
    std::uint64_t n = q - 1;
    for (auto l : prime_factors(q - 1))
      while (n % l == 0 && pow(a, static_cast<std::int64_t>(n / l)) == 1) n /= l;
    return n;
  }
  bool has_tables() const { return !exp_.empty(); }
  /// Discrete log with respect to the table generator.
  std::uint64_t log(Code a) const { return log_.at(a); }
  Code generator() const { return gen_; }

  /// Element rendering: integer in the prime field, polynomial in `a` otherwise.
  std::string str(Code x) const {
    if (x < p) return std::to_string(x);
    auto c = coords(x);
    std::string s;
    for (std::size_t i = r; i-- > 0;) {
      if (c[i] == 0) continue;
      if (!s.empty()) s += "+";
      if (i == 0) {
        s += std::to_string(c[i]);
        continue;
      }
      if (c[i] != 1) s += std::to_string(c[i]) + "*";
      s += "a";
      if (i > 1) s += "^" + std::to_string(i);
    }
    return s;
  }
  std::string modulus_str() const {
    std::string s;
    for (std::size_t i = modulus.size(); i-- > 0;) {
      std::uint32_t c = modulus[i];
      if (c == 0) continue;
      if (!s.empty()) s += "+";
      if (i == 0) {
        s += std::to_string(c);
        continue;
      }
      if (c != 1) s += std::to_string(c) + "*";
      s += "x";
      if (i > 1) s += "^" + std::to_string(i);
    }
    return s;
  }

 private:
  std::vector<Code> pw_;
  std::vector<Code> exp_, log_;
  Code gen_ = 0;

  Code slow_mul(Code a, Code b) const {
    fp::Poly pa = coords(a), pb = coords(b);
    fp::trim(pa);
    fp::trim(pb);
    fp::Poly c = fp::mod(fp::mul(pa, pb, p), modulus, p);
    c.resize(r, 0);
    return from_coords(c);
  }

  void build_tables() {
    if (q == 2) {
      exp_ = {1};
      log_ = {0, 0};
      gen_ = 1;
      return;
    }
    auto fs = prime_factors(q - 1);
    auto slow_pow = [&](Code a, std::uint64_t e) {
      Code res = 1;
      for (Code b = a; e; e >>= 1, b = slow_mul(b, b))
        if (e & 1) res = slow_mul(res, b);
      return res;
    };
    for (Code g = 2; g < q; ++g) {
      bool prim = true;
      for (auto l : fs)
        if (slow_pow(g, (q - 1) / l) == 1) {
          prim = false;
          break;
        }
      if (prim) {
        gen_ = g;
        break;
      }
    }
    exp_.resize(q - 1);
    log_.assign(q, 0);
    Code x = 1;
    for (std::uint64_t k = 0; k < q - 1; ++k) {
      exp_[k] = x;
      log_[x] = static_cast<Code>(k);
      x = slow_mul(x, gen_);
    }
  }
};

/// Shared read-only handle; all Codes must be interpreted with the field they came from.
using FieldDescriptor = std::shared_ptr<const Field>;

/**
 * @brief Builds F_{p^r} with the lexicographically smallest monic irreducible modulus.
 *
 * Moduli x^r + c_{r-1}x^{r-1} + ... + c_0 are ordered by the tuple (c_{r-1}, ..., c_0).
 * Results are memoized, so equal (p, r) yield the same descriptor.
 */
inline FieldDescriptor make_field(std::uint64_t p, std::uint32_t r) {
  if (!is_prime(p)) throw Error("make_field: " + std::to_string(p) + " is not prime");
  if (r < 1) throw Error("make_field: degree must be positive");
  if (ipow(p, r) > (1ull << 31)) throw Error("make_field: field too large");
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, std::uint32_t>, FieldDescriptor> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, r);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const auto P = static_cast<std::uint32_t>(p);
  fp::Poly f(r + 1, 0);
  f[r] = 1;
  for (std::uint64_t idx = 0; idx < ipow(p, r); ++idx) {
    std::uint64_t x = idx;
    for (std::uint32_t i = 0; i < r; ++i, x /= p) f[i] = static_cast<std::uint32_t>(x % p);
    if (fp::irreducible(f, P)) break;
  }
  auto fd = std::make_shared<const Field>(P, r, f);
  cache.emplace(key, fd);
  return fd;
}

/// Value-semantics element wrapper used at API boundaries.
struct FqElem {
  const Field* field = nullptr;
  Code code = 0;

  std::vector<std::uint32_t> coords() const { return field->coords(code); }
  FqElem operator+(FqElem o) const { return {field, field->add(code, o.code)}; }
  FqElem operator-(FqElem o) const { return {field, field->sub(code, o.code)}; }
  FqElem operator*(FqElem o) const { return {field, field->mul(code, o.code)}; }
  FqElem operator/(FqElem o) const { return {field, field->div(code, o.code)}; }
  FqElem operator-() const { return {field, field->neg(code)}; }
  FqElem pow(std::int64_t e) const { return {field, field->pow(code, e)}; }
  FqElem frob(std::uint32_t k = 1) const { return {field, field->frob(code, k)}; }
  bool operator==(const FqElem& o) const { return field == o.field && code == o.code; }
  bool operator!=(const FqElem& o) const { return !(*this == o); }
  bool operator<(const FqElem& o) const { return code < o.code; }
  std::string str() const { return field->str(code); }
};

inline FqElem elem(const FieldDescriptor& f, Code c) { return {f.get(), c}; }

/// Minimal s ≥ 1 with N | q^s - 1.
inline std::uint32_t splitting_degree(std::uint64_t q, std::uint64_t N) {
  if (N == 0 || std::gcd(N, q) != 1) throw Error("splitting_degree: N must be coprime to q");
  std::uint64_t x = q % N;
  std::uint32_t s = 1;
  while (x % N != 1 % N) {
    x = x * (q % N) % N;
    ++s;
  }
  return s;
}

/// Number of N-th roots of unity in F_q((t)): gcd(N, q - 1).
inline std::uint64_t mu_count_local(std::uint64_t q, std::uint64_t N) {
  auto [p, r] = prime_power(q);
  (void)r;
  if (N % p == 0) throw Error("mu_count_local: p divides N");
  return std::gcd(N, q - 1);
}

/// The smallest (by Code) element of exact multiplicative order N.
inline Code primitive_root(const Field& F, std::uint64_t N) {
  if (N == 0 || (F.q - 1) % N != 0) throw Error("primitive_root: N does not divide q - 1");
  if (N == 1) return 1;
  if (F.has_tables()) {
    const std::uint64_t step = (F.q - 1) / N;
    Code best = 0;
    for (std::uint64_t k = 1; k < N; ++k) {
      if (std::gcd(k, N) != 1) continue;
      Code c = F.pow(F.generator(), static_cast<std::int64_t>(k * step));
      if (best == 0 || c < best) best = c;
    }
    return best;
  }
  for (Code x = 1; x < F.q; ++x)
    if (F.pow(x, static_cast<std::int64_t>(N)) == 1 && F.order(x) == N) return x;
  throw Error("primitive_root: not found");
}

/// All N-th roots of unity as ξ, ξ^2, ..., ξ^N = 1 with ξ = primitive_root(F, N).
inline std::vector<FqElem> roots_of_unity(const FieldDescriptor& F, std::uint64_t N) {
  if (N == 0 || (F->q - 1) % N != 0)
    throw Error("roots_of_unity: " + std::to_string(N) + " does not divide q - 1 = " + std::to_string(F->q - 1));
  Code xi = primitive_root(*F, N);
  std::vector<FqElem> out;
  Code x = 1;
  for (std::uint64_t k = 1; k <= N; ++k) {
    x = F->mul(x, xi);
    out.push_back(elem(F, x));
  }
  return out;
}

/// k in [0, N) with xi^k = x, for xi of order N; throws if x is not a power of xi.
inline std::uint64_t mu_log(const Field& F, Code xi, std::uint64_t N, Code x) {
  Code y = 1;
  for (std::uint64_t k = 0; k < N; ++k, y = F.mul(y, xi))
    if (y == x) return k;
  throw Error("mu_log: element is not a power of the chosen root");
}

/**
 * @brief Table of the embedding F_small → F_big sending a to the smallest root of small's modulus.
 *
 * Prime-field elements keep their Code.
 */
inline std::vector<Code> subfield_embedding(const Field& small, const Field& big) {
  if (small.p != big.p || big.r % small.r != 0) throw Error("subfield_embedding: degree mismatch");
  std::vector<Code> out(small.q);
  if (small.r == 1) {
    for (Code c = 0; c < small.q; ++c) out[c] = c;
    return out;
  }
  Code rho = 0;
  bool found = false;
  for (Code x = 0; x < big.q && !found; ++x) {
    Code v = 0, xp = 1;
    for (std::size_t i = 0; i < small.modulus.size(); ++i) {
      v = big.add(v, big.mul(big.from_int(small.modulus[i]), xp));
      xp = big.mul(xp, x);
    }
    if (v == 0) {
      rho = x;
      found = true;
    }
  }
  if (!found) throw Error("subfield_embedding: no root found");
  for (Code c = 0; c < small.q; ++c) {
    auto co = small.coords(c);
    Code v = 0, xp = 1;
    for (std::uint32_t i = 0; i < small.r; ++i) {
      v = big.add(v, big.mul(big.from_int(co[i]), xp));
      xp = big.mul(xp, rho);
    }
    out[c] = v;
  }
  return out;
}

/// Elements of the subfield F_{p^d} ⊂ F (those with x^{p^d} = x), ascending by Code.
inline std::vector<Code> subfield_elements(const Field& F, std::uint32_t d) {
  if (F.r % d != 0) throw Error("subfield_elements: degree does not divide");
  std::vector<Code> out;
  for (Code x = 0; x < F.q; ++x)
    if (F.frob(x, d) == x) out.push_back(x);
  return out;
}

}  // namespace padicvol
