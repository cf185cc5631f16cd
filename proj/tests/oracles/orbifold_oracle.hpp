#pragma once
// Brute-force references for twisted inertia: every vector of K^n is tried, classes are
// found by breadth-first orbit search, and totals come from the closed form for
// diagonal cyclic actions.

#include <map>
#include <queue>
#include <set>
#include <vector>

#include "padicvol/orbifold.hpp"

namespace oracle {

struct BruteClass {
  std::size_t size = 0;  // orbit size
  std::size_t aut = 0;
  padicvol::Elem alpha = 0;
  bool origin = false;
};

/// All triples over the whole of K^n, grouped into orbits by BFS under the stack's group.
inline std::vector<BruteClass> brute_inertia(const padicvol::QuotientStackDesc& st) {
  using namespace padicvol;
  const Field& K = *st.K;
  const auto& Gr = st.G();
  const std::size_t m = Gr.order();
  std::vector<std::vector<Code>> pts;
  std::uint64_t total = padicvol::ipow(K.q, static_cast<unsigned>(st.n));
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<Code> y(st.n);
    std::uint64_t x = idx;
    for (std::size_t i = 0; i < st.n; ++i, x /= K.q) y[i] = static_cast<Code>(x % K.q);
    // φ(y) = g y needs y over F_{q^{S}}; check directly for each g below
    pts.push_back(y);
  }
  std::set<std::tuple<std::vector<Code>, Elem, Elem>> triples;
  for (const auto& y : pts) {
    std::vector<Code> fy(y);
    for (auto& c : fy) c = K.pow(c, static_cast<std::int64_t>(st.q));
    for (Elem g = 0; g < m; ++g) {
      if (st.act(g, y) != fy) continue;
      for (Elem a = 0; a < m; ++a) {
        if (st.act(a, y) != y) continue;
        // g^{-1} φ(α) g = α^q, with α^q by repeated multiplication
        Elem aq = 0;
        for (std::uint64_t i = 0; i < st.q; ++i) aq = Gr.mul(aq, a);
        if (Gr.mul(Gr.mul(Gr.inv[g], Gr.phi[a]), g) != aq) continue;
        triples.insert({y, g, a});
      }
    }
  }
  std::vector<BruteClass> out;
  std::set<std::tuple<std::vector<Code>, Elem, Elem>> done;
  for (const auto& t : triples) {
    if (done.count(t)) continue;
    std::queue<std::tuple<std::vector<Code>, Elem, Elem>> bfs;
    bfs.push(t);
    done.insert(t);
    std::size_t size = 0;
    while (!bfs.empty()) {
      auto [y, g, a] = bfs.front();
      bfs.pop();
      ++size;
      for (Elem h = 0; h < m; ++h) {
        std::tuple<std::vector<Code>, Elem, Elem> nx{st.act(h, y), Gr.mul(Gr.mul(Gr.phi[h], g), Gr.inv[h]), Gr.mul(Gr.mul(h, a), Gr.inv[h])};
        if (done.insert(nx).second) bfs.push(nx);
      }
    }
    bool origin = true;
    for (auto c : std::get<0>(t)) origin = origin && c == 0;
    out.push_back({size, m / size, std::get<2>(t), origin});
  }
  return out;
}

/// Σ_{k=0}^{N-1} q^{-Σ_i frac(k w_i / N)}: the coarse-space volume of [A^n/μ_N] acting diagonally.
inline padicvol::VolumeValue diagonal_total(std::uint64_t q, long N, const std::vector<long>& w) {
  using namespace padicvol;
  VolumeValue s = VolumeValue::with_base(q, 0);
  for (long k = 0; k < N; ++k) {
    Rational e = 0;
    for (long wi : w) e += Rational(((k * wi) % N + N) % N, N);
    s += VolumeValue::q_power(q, -e);
  }
  return s;
}

}  // namespace oracle
