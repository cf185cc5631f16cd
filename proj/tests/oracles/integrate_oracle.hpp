#pragma once
// Reference computations for volumes: truncated geometric sums and brute-force
// solution counts over Z/p[t]/(t^m), written without the library's series type.

#include <cstdint>
#include <functional>
#include <vector>

#include "padicvol/volume.hpp"

namespace oracle {

/// Σ_{v=0}^{L} (1 - q^{-1}) q^{-v(1 + e/r)} and the tail bound q^{-(L+1)(1 + e/r)}.
inline std::pair<padicvol::VolumeValue, padicvol::VolumeValue> monomial_partial_sum(int e, int r, std::uint64_t q, int L) {
  using padicvol::Rational;
  using padicvol::VolumeValue;
  VolumeValue s = VolumeValue::with_base(q, 0);
  VolumeValue c = VolumeValue::with_base(q, 1) - VolumeValue::q_power(q, -1);
  for (int v = 0; v <= L; ++v) s += c * VolumeValue::q_power(q, -Rational(v) * (1 + Rational(e, r)));
  return {s, VolumeValue::q_power(q, -Rational(L + 1) * (1 + Rational(e, r)))};
}

/// Truncated polynomial in t over Z/p: coefficients 0..m-1.
struct Trunc {
  std::vector<std::int64_t> c;
  std::int64_t p;
  Trunc operator+(const Trunc& o) const {
    Trunc r{c, p};
    for (std::size_t i = 0; i < c.size(); ++i) r.c[i] = (r.c[i] + o.c[i]) % p;
    return r;
  }
  Trunc operator-(const Trunc& o) const {
    Trunc r{c, p};
    for (std::size_t i = 0; i < c.size(); ++i) r.c[i] = ((r.c[i] - o.c[i]) % p + p) % p;
    return r;
  }
  Trunc operator*(const Trunc& o) const {
    Trunc r{std::vector<std::int64_t>(c.size(), 0), p};
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; i + j < c.size(); ++j) r.c[i + j] = (r.c[i + j] + c[i] * o.c[j]) % p;
    return r;
  }
  bool zero() const {
    for (auto x : c)
      if (x) return false;
    return true;
  }
};

/**
 * @brief Counts (x, y) ∈ (Z/p[t]/t^m)^2 with F(x, y) ≡ 0 whose reduction is a smooth point.
 *
 * `smooth(x0, y0)` decides smoothness of the reduction; p must be prime (q = p).
 */
inline std::uint64_t count_plane_lifts(std::int64_t p, int m, const std::function<Trunc(const Trunc&, const Trunc&)>& F,
                                       const std::function<bool(std::int64_t, std::int64_t)>& smooth) {
  std::uint64_t total = 1;
  for (int i = 0; i < 2 * m; ++i) total *= static_cast<std::uint64_t>(p);
  std::uint64_t count = 0;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Trunc x{std::vector<std::int64_t>(static_cast<std::size_t>(m)), p}, y = x;
    std::uint64_t v = idx;
    for (int i = 0; i < m; ++i, v /= static_cast<std::uint64_t>(p)) x.c[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(v % static_cast<std::uint64_t>(p));
    for (int i = 0; i < m; ++i, v /= static_cast<std::uint64_t>(p)) y.c[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(v % static_cast<std::uint64_t>(p));
    if (F(x, y).zero() && smooth(x.c[0], y.c[0])) ++count;
  }
  return count;
}

}  // namespace oracle
