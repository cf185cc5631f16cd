#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "group.hpp"

namespace padicvol {

/// Γ-torsor over F_q((t)) presented by images of the tame generators β (Frobenius) and γ (monodromy).
struct Cocycle {
  Elem x_beta = 0;
  Elem x_gamma = 0;
  auto tie() const { return std::tie(x_beta, x_gamma); }
  bool operator<(const Cocycle& o) const { return tie() < o.tie(); }
  bool operator==(const Cocycle& o) const { return tie() == o.tie(); }
};

/// x_β φ(x_γ) x_β^{-1} = x_γ^q.
inline bool is_cocycle(const GroupWithFrobenius& G, const Cocycle& c, std::uint64_t q) {
  Elem lhs = G.mul(G.mul(c.x_beta, G.phi[c.x_gamma]), G.inv[c.x_beta]);
  return lhs == G.pow(c.x_gamma, static_cast<long>(q % G.elem_order(c.x_gamma)));
}

/// All cocycles equivalent to c under (a, b) ~ (y^{-1} a φ(y), y^{-1} b y).
inline std::set<Cocycle> cocycle_orbit(const GroupWithFrobenius& G, const Cocycle& c) {
  std::set<Cocycle> orbit;
  for (Elem y = 0; y < G.order(); ++y) {
    Elem yi = G.inv[y];
    orbit.insert({G.mul(G.mul(yi, c.x_beta), G.phi[y]), G.mul(G.mul(yi, c.x_gamma), y)});
  }
  return orbit;
}

struct Classification {
  bool unramified = false;         ///< equivalent to some (x_β, 1)
  bool strongly_ramified = false;  ///< equivalent to some (1, x_γ)
  std::string tag() const {
    if (unramified && strongly_ramified) return "unramified+strongly_ramified";
    if (unramified) return "unramified";
    if (strongly_ramified) return "strongly_ramified";
    return "general";
  }
};

inline Classification classify(const GroupWithFrobenius& G, const Cocycle& c) {
  Classification k;
  for (const auto& o : cocycle_orbit(G, c)) {
    if (o.x_gamma == 0) k.unramified = true;
    if (o.x_beta == 0) k.strongly_ramified = true;
  }
  return k;
}

struct TorsorClass {
  Cocycle rep;  ///< lexicographically minimal cocycle of the class
  std::size_t size = 0;
  Classification kind;
};

inline void check_tame(const GroupWithFrobenius& G, std::uint64_t q) {
  auto [p, r] = prime_power(q);
  (void)r;
  if (G.order() % p == 0) throw Error("torsors: group order divisible by the characteristic");
}

/// H^1(F, Γ) as classes of cocycles, ordered by representative.
inline std::vector<TorsorClass> enumerate_h1(const GroupWithFrobenius& G, std::uint64_t q) {
  check_tame(G, q);
  std::vector<TorsorClass> out;
  std::set<Cocycle> seen;
  for (Elem a = 0; a < G.order(); ++a)
    for (Elem b = 0; b < G.order(); ++b) {
      Cocycle c{a, b};
      if (seen.count(c) || !is_cocycle(G, c, q)) continue;
      auto orbit = cocycle_orbit(G, c);
      seen.insert(orbit.begin(), orbit.end());
      out.push_back({*orbit.begin(), orbit.size(), classify(G, c)});
    }
  std::sort(out.begin(), out.end(), [](const TorsorClass& x, const TorsorClass& y) { return x.rep < y.rep; });
  return out;
}

struct AlgebraFactor {
  std::size_t f = 1;  ///< residue degree
  std::size_t e = 1;  ///< ramification index
  std::size_t mult = 1;
  auto tie() const { return std::tie(f, e, mult); }
  bool operator==(const AlgebraFactor& o) const { return tie() == o.tie(); }
  bool operator<(const AlgebraFactor& o) const { return tie() < o.tie(); }
};

/// Orbits of the set Γ under β·y = x_β φ(y), γ·y = x_γ y.
inline std::vector<std::vector<Elem>> torsor_orbits(const GroupWithFrobenius& G, const Cocycle& c) {
  std::vector<int> id(G.order(), -1);
  std::vector<std::vector<Elem>> orbits;
  for (Elem s = 0; s < G.order(); ++s) {
    if (id[s] >= 0) continue;
    std::vector<Elem> orb{s}, stack{s};
    id[s] = static_cast<int>(orbits.size());
    while (!stack.empty()) {
      Elem y = stack.back();
      stack.pop_back();
      for (Elem z : {G.mul(c.x_beta, G.phi[y]), G.mul(c.x_gamma, y)})
        if (id[z] < 0) {
          id[z] = id[s];
          orb.push_back(z);
          stack.push_back(z);
        }
    }
    std::sort(orb.begin(), orb.end());
    orbits.push_back(orb);
  }
  return orbits;
}

/// Shape Π F_i of the étale algebra of the torsor: each orbit gives f·e = |orbit|, e = γ-cycle length.
inline std::vector<AlgebraFactor> orbit_decomposition(const GroupWithFrobenius& G, const Cocycle& c) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> count;
  for (const auto& orb : torsor_orbits(G, c)) {
    std::size_t e = 1;
    for (Elem y = G.mul(c.x_gamma, orb[0]); y != orb[0]; y = G.mul(c.x_gamma, y)) ++e;
    count[{orb.size() / e, e}] += 1;
  }
  std::vector<AlgebraFactor> out;
  for (auto& [fe, m] : count) out.push_back({fe.first, fe.second, m});
  return out;
}

struct TwistResult {
  GroupWithFrobenius inner;  ///< Γ with Frobenius Ad(p^{-1})∘φ
  Cocycle twist;             ///< the unramified class P = (p, 1)
  Cocycle result;
  Classification kind;
};

/**
 * @brief Twists by the unramified torsor P = (x_β^{-1}, 1): (a, b) ↦ (a·p, b) into Γ_P.
 *
 * The image of c is (1, x_γ), strongly ramified for the inner form.
 */
inline TwistResult twist_by(const GroupWithFrobenius& G, const Cocycle& c, Elem p) {
  TwistResult T;
  T.inner = G;
  for (Elem y = 0; y < G.order(); ++y) T.inner.phi[y] = G.mul(G.mul(G.inv[p], G.phi[y]), p);
  T.twist = {p, 0};
  T.result = {G.mul(c.x_beta, p), c.x_gamma};
  T.kind = classify(T.inner, T.result);
  return T;
}

inline TwistResult twist_to_strongly_ramified(const GroupWithFrobenius& G, const Cocycle& c) {
  auto T = twist_by(G, c, G.inv[c.x_beta]);
  if (!T.kind.strongly_ramified) throw Error("twist_to_strongly_ramified: result is not strongly ramified");
  return T;
}

struct InertiaSubgroup {
  std::vector<Elem> elements;  ///< I_Q, ascending
  std::size_t N = 1;
  Elem generator = 0;  ///< x with (1, x) in the class; sent to ξ_N
  std::map<Elem, Rational> character;  ///< x^k ↦ k/N ∈ Q/Z
};

/// I_Q = ⟨x⟩ for the representative (1, x) with minimal x; canonical character x ↦ ξ_N.
inline InertiaSubgroup inertia_subgroup(const GroupWithFrobenius& G, const Cocycle& c) {
  Elem x = 0;
  bool found = false;
  for (const auto& o : cocycle_orbit(G, c))
    if (o.x_beta == 0 && (!found || o.x_gamma < x)) {
      x = o.x_gamma;
      found = true;
    }
  if (!found) throw Error("inertia_subgroup: torsor is not strongly ramified");
  InertiaSubgroup I;
  I.generator = x;
  I.N = G.elem_order(x);
  Elem y = 0;
  for (std::size_t k = 0; k < I.N; ++k, y = G.mul(y, x)) {
    I.elements.push_back(y);
    I.character[y] = Rational(static_cast<long>(k), static_cast<long>(I.N));
  }
  std::sort(I.elements.begin(), I.elements.end());
  return I;
}

}  // namespace padicvol
