#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace padicvol {

using Elem = std::uint32_t;  ///< index into a group's element list

/**
 * @brief Finite group by multiplication table, with the Frobenius automorphism φ.
 *
 * Element 0 is the identity. For a constant group φ is the identity permutation.
 */
struct GroupWithFrobenius {
  std::vector<std::vector<Elem>> table;
  std::vector<Elem> inv;
  std::vector<Elem> phi;
  std::vector<std::string> labels;

  std::size_t order() const { return table.size(); }
  Elem identity() const { return 0; }
  Elem mul(Elem a, Elem b) const { return table[a][b]; }
  Elem pow(Elem a, long e) const {
    if (e < 0) {
      a = inv[a];
      e = -e;
    }
    Elem r = 0;
    for (long i = 0; i < e; ++i) r = table[r][a];
    return r;
  }
  Elem phi_pow(Elem a, unsigned k) const {
    for (unsigned i = 0; i < k; ++i) a = phi[a];
    return a;
  }
  std::size_t elem_order(Elem a) const {
    std::size_t k = 1;
    for (Elem x = a; x != 0; x = table[x][a]) ++k;
    return k;
  }
  std::size_t exponent() const {
    std::size_t e = 1;
    for (Elem a = 0; a < order(); ++a) e = std::lcm(e, elem_order(a));
    return e;
  }
  bool is_abelian() const {
    for (Elem a = 0; a < order(); ++a)
      for (Elem b = 0; b < order(); ++b)
        if (table[a][b] != table[b][a]) return false;
    return true;
  }
  bool phi_trivial() const {
    for (Elem a = 0; a < order(); ++a)
      if (phi[a] != a) return false;
    return true;
  }
  std::string label(Elem a) const { return a < labels.size() ? labels[a] : std::to_string(a); }

  /// Throws unless the table is a group and φ an automorphism.
  void validate() const {
    const std::size_t n = order();
    if (n == 0 || inv.size() != n || phi.size() != n) throw Error("group: inconsistent sizes");
    for (Elem a = 0; a < n; ++a) {
      if (table[0][a] != a || table[a][0] != a) throw Error("group: element 0 is not the identity");
      if (table[a][inv[a]] != 0) throw Error("group: bad inverse");
      std::vector<bool> seen(n, false);
      for (Elem b = 0; b < n; ++b) seen[table[a][b]] = true;
      if (std::count(seen.begin(), seen.end(), true) != static_cast<long>(n)) throw Error("group: table is not a Latin square");
    }
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        for (Elem c = 0; c < n; ++c)
          if (table[table[a][b]][c] != table[a][table[b][c]]) throw Error("group: not associative");
    std::vector<bool> hit(n, false);
    for (Elem a = 0; a < n; ++a) {
      hit[phi[a]] = true;
      for (Elem b = 0; b < n; ++b)
        if (phi[table[a][b]] != table[phi[a]][phi[b]]) throw Error("group: phi is not a homomorphism");
    }
    if (std::count(hit.begin(), hit.end(), true) != static_cast<long>(n)) throw Error("group: phi is not bijective");
  }

  /// Z/N with trivial Frobenius, element k ↔ index k.
  static GroupWithFrobenius cyclic(std::size_t N) {
    GroupWithFrobenius G;
    G.table.assign(N, std::vector<Elem>(N));
    G.inv.resize(N);
    G.phi.resize(N);
    for (Elem a = 0; a < N; ++a) {
      for (Elem b = 0; b < N; ++b) G.table[a][b] = static_cast<Elem>((a + b) % N);
      G.inv[a] = static_cast<Elem>((N - a) % N);
      G.phi[a] = a;
      G.labels.push_back(std::to_string(a));
    }
    return G;
  }

  /// The symmetric group on k letters, constant; permutations in lexicographic order.
  static GroupWithFrobenius symmetric(std::size_t k) {
    if (k == 0 || k > 6) throw Error("symmetric: degree must be in 1..6");
    std::vector<std::vector<std::size_t>> perms;
    std::vector<std::size_t> pm(k);
    std::iota(pm.begin(), pm.end(), 0);
    do perms.push_back(pm);
    while (std::next_permutation(pm.begin(), pm.end()));
    std::map<std::vector<std::size_t>, Elem> idx;
    for (Elem i = 0; i < perms.size(); ++i) idx[perms[i]] = i;
    const std::size_t n = perms.size();
    GroupWithFrobenius G;
    G.table.assign(n, std::vector<Elem>(n));
    G.inv.resize(n);
    G.phi.resize(n);
    for (Elem a = 0; a < n; ++a) {
      for (Elem b = 0; b < n; ++b) {
        std::vector<std::size_t> c(k);
        for (std::size_t i = 0; i < k; ++i) c[i] = perms[a][perms[b][i]];  // a∘b
        G.table[a][b] = idx[c];
        if (G.table[a][b] == 0) G.inv[a] = b;
      }
      G.phi[a] = a;
      std::string s = "(";
      for (std::size_t i = 0; i < k; ++i) s += std::to_string(perms[a][i] + 1);
      G.labels.push_back(s + ")");
    }
    return G;
  }

  /// A × B with φ acting componentwise; (a, b) ↔ a·|B| + b.
  static GroupWithFrobenius product(const GroupWithFrobenius& A, const GroupWithFrobenius& B) {
    const std::size_t m = B.order(), n = A.order() * m;
    GroupWithFrobenius G;
    G.table.assign(n, std::vector<Elem>(n));
    G.inv.resize(n);
    G.phi.resize(n);
    auto at = [m](Elem a, Elem b) { return static_cast<Elem>(a * m + b); };
    for (Elem x = 0; x < n; ++x) {
      Elem a = static_cast<Elem>(x / m), b = static_cast<Elem>(x % m);
      for (Elem y = 0; y < n; ++y) G.table[x][y] = at(A.mul(a, static_cast<Elem>(y / m)), B.mul(b, static_cast<Elem>(y % m)));
      G.inv[x] = at(A.inv[a], B.inv[b]);
      G.phi[x] = at(A.phi[a], B.phi[b]);
      G.labels.push_back("(" + A.label(a) + "," + B.label(b) + ")");
    }
    return G;
  }

  /// Z/N with φ(k) = m·k, m a unit mod N (e.g. μ_N with m = q).
  static GroupWithFrobenius cyclic_twisted(std::size_t N, std::size_t m) {
    if (std::gcd(m % N, N) != 1 && N > 1) throw Error("cyclic_twisted: multiplier not a unit");
    auto G = cyclic(N);
    for (Elem a = 0; a < N; ++a) G.phi[a] = static_cast<Elem>(a * m % N);
    return G;
  }
};

/**
 * @brief Finite subgroup of GL_n over a finite field K, closed from generators.
 *
 * Elements are sorted by entry Codes (identity forced to index 0). φ is the entrywise
 * q-power Frobenius, q = p^{base_r}.
 */
struct MatrixGroup {
  FieldDescriptor K;
  std::size_t n = 0;
  std::uint32_t base_r = 1;
  std::vector<Matrix> elems;
  GroupWithFrobenius G;

  Elem index_of(const Matrix& A) const {
    auto it = index_.find(A.a);
    if (it == index_.end()) throw Error("matrix is not a group element");
    return it->second;
  }
  bool contains(const Matrix& A) const { return index_.count(A.a) > 0; }
  std::size_t order() const { return elems.size(); }

  static MatrixGroup generate(const FieldDescriptor& K, std::size_t n, std::uint32_t base_r, const std::vector<Matrix>& gens,
                              std::size_t max_order = 100000) {
    MatrixGroup M;
    M.K = K;
    M.n = n;
    M.base_r = base_r;
    const Field& F = *K;
    std::map<std::vector<Code>, Matrix> found;
    Matrix I = Matrix::identity(n);
    found.emplace(I.a, I);
    std::vector<Matrix> frontier{I};
    for (const auto& g : gens) {
      if (g.rows != n || g.cols != n) throw Error("generator has wrong shape");
      inverse(F, g);  // throws if singular
    }
    while (!frontier.empty()) {
      std::vector<Matrix> next;
      for (const auto& A : frontier)
        for (const auto& g : gens) {
          Matrix B = mat_mul(F, A, g);
          if (found.emplace(B.a, B).second) {
            next.push_back(B);
            if (found.size() > max_order) throw GuardError("group closure exceeds size bound");
          }
        }
      frontier = std::move(next);
    }
    M.elems.push_back(I);
    for (auto& [k, A] : found)
      if (A != I) M.elems.push_back(A);
    for (Elem i = 0; i < M.elems.size(); ++i) M.index_.emplace(M.elems[i].a, i);
    const std::size_t N = M.elems.size();
    if (K->p != 0 && N % K->p == 0) throw Error("group order divisible by the characteristic");
    M.G.table.assign(N, std::vector<Elem>(N));
    M.G.inv.resize(N);
    M.G.phi.resize(N);
    for (Elem a = 0; a < N; ++a) {
      for (Elem b = 0; b < N; ++b) {
        M.G.table[a][b] = M.index_of(mat_mul(F, M.elems[a], M.elems[b]));
        if (M.G.table[a][b] == 0) M.G.inv[a] = b;
      }
      Matrix fa = mat_frob(F, M.elems[a], base_r);
      if (!M.contains(fa)) throw Error("group is not stable under Frobenius");
      M.G.phi[a] = M.index_of(fa);
      M.G.labels.push_back(M.render(a));
    }
    return M;
  }

  /// Image under a field embedding K → K' (table indexed by Code).
  MatrixGroup embedded(const FieldDescriptor& K2, const std::vector<Code>& emb) const {
    MatrixGroup M = *this;
    M.K = K2;
    M.index_.clear();
    for (auto& A : M.elems)
      for (auto& x : A.a) x = emb[x];
    for (Elem i = 0; i < M.elems.size(); ++i) M.index_.emplace(M.elems[i].a, i);
    for (Elem a = 0; a < M.elems.size(); ++a) M.G.labels[a] = M.render(a);
    return M;
  }

  std::string render(Elem a) const {
    const Matrix& A = elems[a];
    std::string s = "[";
    for (std::size_t i = 0; i < A.rows; ++i) {
      s += i ? ",[" : "[";
      for (std::size_t j = 0; j < A.cols; ++j) s += (j ? "," : "") + K->str(A(i, j));
      s += "]";
    }
    return s + "]";
  }

 private:
  std::map<std::vector<Code>, Elem> index_;
};

}  // namespace padicvol
