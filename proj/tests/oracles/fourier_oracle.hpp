#pragma once
// Floating-point references for the exact character algebra: values are evaluated in C,
// transforms are plain DFT sums, and induced counts come from explicit induced
// representation matrices.

#include <cmath>
#include <complex>
#include <vector>

#include "padicvol/fourier.hpp"

namespace oracle {

using cd = std::complex<double>;

inline cd evaluate(const padicvol::CycloValue& v) {
  const auto& ctx = *v.context();
  cd s = 0;
  for (std::size_t j = 0; j < ctx.D; ++j)
    for (std::size_t i = 0; i < ctx.degree(); ++i) {
      double c = v.coeff(i, j).get_d();
      if (c == 0) continue;
      s += c * std::polar(1.0, 2 * M_PI * static_cast<double>(i) / static_cast<double>(ctx.M)) *
           std::pow(static_cast<double>(ctx.q), -static_cast<double>(j) / static_cast<double>(ctx.D));
    }
  return s;
}

inline cd char_value(const padicvol::FiniteAbelianGroup& A, std::size_t chi, std::size_t t) {
  auto c = A.element(chi), x = A.element(t);
  double e = 0;
  for (std::size_t i = 0; i < c.size(); ++i) e += static_cast<double>(c[i] * x[i]) / static_cast<double>(A.d[i]);
  return std::polar(1.0, 2 * M_PI * e);
}

inline std::vector<cd> dft(const padicvol::FiniteAbelianGroup& A, const std::vector<cd>& f) {
  std::vector<cd> out(A.order());
  for (std::size_t chi = 0; chi < A.order(); ++chi) {
    for (std::size_t t = 0; t < A.order(); ++t) out[chi] += std::conj(char_value(A, chi, t)) * f[t];
    out[chi] /= static_cast<double>(A.order());
  }
  return out;
}

/**
 * Tr(Fr | (Ind V)^κ) for V = ⊕_j ψ_j over the subgroup, Fr acting on ψ_j by c_j.
 * Basis e_{r,j}, r a coset representative; g·e_{r,j} = ψ_j(h) e_{r',j} where g + r = r' + h.
 */
inline std::vector<cd> induced_isotypic_traces(const padicvol::FiniteAbelianGroup& G, const std::vector<std::size_t>& sub,
                                               const std::vector<std::size_t>& psi_on_G,  // ψ_j as a character of G restricted
                                               const std::vector<cd>& frob) {
  std::vector<std::size_t> reps, coset_of(G.order());
  std::vector<bool> seen(G.order(), false);
  for (std::size_t g = 0; g < G.order(); ++g) {
    if (seen[g]) continue;
    for (auto h : sub) {
      seen[G.add(g, h)] = true;
      coset_of[G.add(g, h)] = reps.size();
    }
    reps.push_back(g);
  }
  auto neg = [&](std::size_t a) {
    auto v = G.element(a);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (G.d[i] - v[i]) % G.d[i];
    return G.index_of(v);
  };
  std::vector<cd> out(G.order());
  for (std::size_t kappa = 0; kappa < G.order(); ++kappa) {
    // trace of (1/|G|) Σ_g κ(g)^{-1} ρ(g) Fr: only diagonal entries of ρ(g) contribute
    cd tr = 0;
    for (std::size_t g = 0; g < G.order(); ++g)
      for (std::size_t r = 0; r < reps.size(); ++r) {
        std::size_t gr = G.add(g, reps[r]);
        if (coset_of[gr] != r) continue;
        std::size_t h = G.add(gr, neg(reps[r]));
        for (std::size_t j = 0; j < psi_on_G.size(); ++j) tr += std::conj(char_value(G, kappa, g)) * char_value(G, psi_on_G[j], h) * frob[j];
      }
    out[kappa] = tr / static_cast<double>(G.order());
  }
  return out;
}

}  // namespace oracle
