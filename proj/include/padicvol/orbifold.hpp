#pragma once

#include <functional>
#include <json.hpp>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "group.hpp"
#include "integrate.hpp"
#include "parallel.hpp"
#include "series.hpp"
#include "volume.hpp"

namespace padicvol {

// ---------------------------------------------------------------------------
// Weights

/// Σ c_i with c_i ∈ (0, 1] lifting χ_i ∈ Q/Z.
inline Rational weight_of_tuple(const std::vector<Rational>& chis) {
  Rational w = 0;
  for (const auto& c : chis) {
    Rational f = frac(c);
    w += f == 0 ? Rational(1) : f;
  }
  return w;
}

/// Exponents c_i ∈ [1, N] of the eigenvalues ξ^{c_i} of A, ascending, with multiplicity.
inline std::vector<long> eigen_exponents(const Field& K, const Matrix& A, Code xi, std::uint64_t N) {
  std::vector<long> c;
  Code lam = 1;
  for (std::uint64_t k = 1; k <= N; ++k) {
    lam = K.mul(lam, xi);
    Matrix M = mat_sub(K, A, mat_scale(K, Matrix::identity(A.rows), lam));
    std::size_t dim = A.rows - rank(K, M);
    for (std::size_t i = 0; i < dim; ++i) c.push_back(static_cast<long>(k));
  }
  if (c.size() != A.rows) throw Error("matrix is not diagonalizable over the working field with eigenvalues in mu_N");
  return c;
}

// ---------------------------------------------------------------------------
// μ_N-actions and the λ-map

/// A linear μ_N-action: A is the matrix of the primitive root ξ.
struct MuNAction {
  FieldDescriptor K;
  std::uint32_t base_r = 1;  ///< q = p^{base_r}
  std::uint64_t N = 1;
  Matrix A;
  Code xi = 1;
};

inline Rational action_weight(const MuNAction& act) {
  const Field& K = *act.K;
  if (mat_pow(K, act.A, act.N) != Matrix::identity(act.A.rows)) throw Error("action_weight: A^N is not the identity");
  Rational w = 0;
  for (long c : eigen_exponents(K, act.A, act.xi, act.N)) w += c;
  return w / Rational(static_cast<long>(act.N));
}

struct LambdaCertificate {
  bool order_ok = false;      ///< A^N = 1
  bool algebraic = false;     ///< ^φA = A^q
  bool commutes = false;      ///< ^φB·B^{-1} commutes with diag(t^{c_i/N})
  bool frobenius_fixed = false;  ///< ^φ(B^{-1}λ̃B) = B^{-1}λ̃B exactly
  bool passed() const { return order_ok && algebraic && commutes && frobenius_fixed; }
};

struct LambdaMap {
  Matrix B, Binv;
  std::vector<long> c;  ///< exponents after diagonalization, ascending
  std::vector<std::vector<TruncatedSeries>> substitution;  ///< B^{-1} diag(u^{c_i}) B over O_L, u^N = t
  LambdaCertificate certificate;
};

/**
 * @brief Diagonalizes the action and checks Frobenius-fixedness of x ↦ B^{-1} diag(t^{c_i/N}) B x.
 *
 * Eigenvectors are normalized to have first nonzero entry 1, so B is canonical given the RREF.
 * Never throws on a failed certificate; see lambda_map for the throwing form.
 */
inline LambdaMap lambda_certificate(const MuNAction& act) {
  const Field& K = *act.K;
  const std::size_t n = act.A.rows;
  LambdaMap L;
  L.certificate.order_ok = mat_pow(K, act.A, act.N) == Matrix::identity(n);
  std::uint64_t q = ipow(K.p, act.base_r);
  L.certificate.algebraic = mat_frob(K, act.A, act.base_r) == mat_pow(K, act.A, q);
  std::vector<std::vector<Code>> cols;
  Code lam = 1;
  for (std::uint64_t k = 1; k <= act.N; ++k) {
    lam = K.mul(lam, act.xi);
    auto ker = kernel(K, mat_sub(K, act.A, mat_scale(K, Matrix::identity(n), lam)));
    for (auto& v : ker) {
      std::size_t i = 0;
      while (v[i] == 0) ++i;
      Code s = K.inv(v[i]);
      for (auto& x : v) x = K.mul(x, s);
      cols.push_back(v);
      L.c.push_back(static_cast<long>(k));
    }
  }
  if (cols.size() != n) throw Error("lambda_map: action is not diagonalizable with eigenvalues in mu_N");
  Matrix V = from_columns(cols);
  L.Binv = V;
  L.B = inverse(K, V);
  Matrix C = mat_mul(K, mat_frob(K, L.B, act.base_r), L.Binv);
  L.certificate.commutes = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (L.c[i] != L.c[j] && C(i, j) != 0) L.certificate.commutes = false;
  const int N = static_cast<int>(act.N);
  auto build = [&](const Matrix& Bi, const Matrix& Bm) {
    std::vector<std::vector<TruncatedSeries>> S(n, std::vector<TruncatedSeries>(n, TruncatedSeries(act.K, N)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          Code coef = K.mul(Bi(i, k), Bm(k, j));
          if (coef) S[i][j] = S[i][j] + TruncatedSeries::monomial(act.K, N, coef, L.c[k]);
        }
    return S;
  };
  L.substitution = build(L.Binv, L.B);
  L.certificate.frobenius_fixed = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (L.substitution[i][j].frobenius(act.base_r) != L.substitution[i][j]) L.certificate.frobenius_fixed = false;
  return L;
}

/// lambda_certificate, throwing when the rationality certificate fails.
inline LambdaMap lambda_map(const MuNAction& act, long precision = 0) {
  (void)precision;  // the substitution is an exact polynomial in u
  auto L = lambda_certificate(act);
  if (!L.certificate.order_ok) throw Error("lambda_map: A^N is not the identity");
  if (!L.certificate.passed())
    throw Error("lambda_map: rationality check failed (Frobenius of A is not A^q, so the action is not algebraic)");
  return L;
}

// ---------------------------------------------------------------------------
// Quotient stacks

struct StackSpec {
  std::string name;
  std::uint64_t p = 0;
  std::uint32_t r = 1;
  std::size_t n = 0;
  std::string kind;  ///< "muN" | "matrix_list"
  std::uint64_t N = 0;
  std::vector<std::vector<std::vector<std::string>>> generators;  ///< entries: integers or "xi^k"
  std::vector<long> weights;  ///< muN shorthand: diag(ξ^{w_i})
  std::uint32_t ext_degree = 1;
};

inline std::string json_entry(const nlohmann::json& e) {
  if (e.is_number_integer()) return std::to_string(e.get<long>());
  if (e.is_string()) return e.get<std::string>();
  throw Error("matrix entry must be an integer or a string such as \"xi^2\"");
}

inline std::vector<std::vector<std::string>> json_matrix(const nlohmann::json& m) {
  if (!m.is_array() || m.empty()) throw Error("matrix must be a non-empty array of rows");
  std::vector<std::vector<std::string>> out;
  for (const auto& row : m) {
    if (!row.is_array()) throw Error("matrix rows must be arrays");
    std::vector<std::string> r;
    for (const auto& e : row) r.push_back(json_entry(e));
    out.push_back(r);
  }
  return out;
}

inline StackSpec parse_stack_spec(const nlohmann::json& j) {
  auto need = [&](const char* k) -> const nlohmann::json& {
    if (!j.contains(k)) throw Error(std::string("stack spec: missing field '") + k + "'");
    return j.at(k);
  };
  StackSpec s;
  s.name = j.value("name", std::string("stack"));
  s.p = need("p").get<std::uint64_t>();
  s.r = j.value("r", 1u);
  s.n = need("n").get<std::size_t>();
  s.ext_degree = j.value("ext_degree", 1u);
  const auto& g = need("group");
  if (!g.contains("kind")) throw Error("stack spec: missing field 'group.kind'");
  s.kind = g.at("kind").get<std::string>();
  s.N = g.value("N", std::uint64_t{0});
  if (s.kind == "muN") {
    if (s.N == 0) throw Error("stack spec: muN requires 'N'");
    if (g.contains("matrix"))
      s.generators.push_back(json_matrix(g.at("matrix")));
    else if (g.contains("weights"))
      s.weights = g.at("weights").get<std::vector<long>>();
    else
      throw Error("stack spec: muN requires 'matrix' or 'weights'");
  } else if (s.kind == "matrix_list") {
    if (!g.contains("generators")) throw Error("stack spec: matrix_list requires 'generators'");
    for (const auto& m : g.at("generators")) s.generators.push_back(json_matrix(m));
  } else {
    throw Error("stack spec: unknown group kind '" + s.kind + "'");
  }
  return s;
}

/// "3", "-1", "xi", "xi^2", "-xi^2", "2*xi".
inline Code parse_entry(const Field& K, Code xi, bool have_xi, std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  if (s.empty()) throw Error("empty matrix entry");
  long sign = 1;
  if (s[0] == '-') {
    sign = -1;
    s = s.substr(1);
  }
  Code coef = 1;
  auto xpos = s.find("xi");
  if (xpos == std::string::npos) {
    try {
      std::size_t used = 0;
      long v = std::stol(s, &used);
      if (used != s.size()) throw Error("bad matrix entry '" + s + "'");
      return K.from_int(sign * v);
    } catch (const std::logic_error&) {
      throw Error("bad matrix entry '" + s + "'");
    }
  }
  if (!have_xi) throw Error("matrix entry uses xi but no N was given");
  if (xpos > 0) {
    std::string c = s.substr(0, xpos);
    if (c.back() != '*') throw Error("bad matrix entry '" + s + "'");
    coef = K.from_int(std::stol(c.substr(0, c.size() - 1)));
  }
  std::string rest = s.substr(xpos + 2);
  long e = 1;
  if (!rest.empty()) {
    if (rest[0] != '^') throw Error("bad matrix entry '" + s + "'");
    try {
      e = std::stol(rest.substr(1));
    } catch (const std::logic_error&) {
      throw Error("bad matrix entry '" + s + "'");
    }
  }
  Code v = K.mul(coef, K.pow(xi, e));
  return sign < 0 ? K.neg(v) : v;
}

struct ClassKey {
  std::vector<Code> y;
  Elem g = 0;
  Elem alpha = 0;
  auto tie() const { return std::tie(y, g, alpha); }
  bool operator<(const ClassKey& o) const { return tie() < o.tie(); }
  bool operator==(const ClassKey& o) const { return tie() == o.tie(); }
};

/**
 * @brief [A^n/Γ] over F_q with all data realized in one working field K = F_{q^S}.
 *
 * S is large enough for the group entries, every twisted fixed-point set
 * {y : φ(y) = g·y}, the exponent-th roots of unity, and the N(q-1)-th roots used by
 * Kummer membership tests.
 */
struct QuotientStackDesc {
  std::string name;
  std::uint32_t p = 0, r = 1;
  std::uint64_t q = 0;
  std::size_t n = 0;
  std::uint32_t S = 1;
  FieldDescriptor K;
  MatrixGroup group;
  std::uint64_t exponent = 1;
  Code xi_E = 1;     ///< primitive exponent-th root in K
  std::uint64_t mu_N = 0;  ///< for μ_N stacks: N, with mu_gen = image of ξ_N
  Elem mu_gen = 0;

  const GroupWithFrobenius& G() const { return group.G; }
  std::size_t order() const { return group.order(); }
  std::vector<Code> phi(const std::vector<Code>& y) const {
    std::vector<Code> out(y);
    for (auto& x : out) x = K->frob(x, r);
    return out;
  }
  std::vector<Code> act(Elem h, const std::vector<Code>& y) const { return n == 0 ? y : mat_vec(*K, group.elems[h], y); }

  /// ξ_N in K: ξ_E^{E/N} when N | E, else the smallest primitive N-th root of K.
  Code root_of_order(std::uint64_t N) const {
    if (exponent % N == 0) return K->pow(xi_E, static_cast<std::int64_t>(exponent / N));
    return primitive_root(*K, N);
  }

  /// The α-relation g^{-1}φ(α)g = α^q.
  bool alpha_compatible(Elem g, Elem a) const {
    const auto& Gr = G();
    return Gr.mul(Gr.mul(Gr.inv[g], Gr.phi[a]), g) == Gr.pow(a, static_cast<long>(q % Gr.elem_order(a)));
  }

  bool valid_triple(const ClassKey& k) const {
    return phi(k.y) == act(k.g, k.y) && act(k.alpha, k.y) == k.y && alpha_compatible(k.g, k.alpha);
  }

  /// The image of (y, g, α) under h: (hy, φ(h) g h^{-1}, h α h^{-1}).
  ClassKey transport(Elem h, const ClassKey& k) const {
    const auto& Gr = G();
    return {act(h, k.y), Gr.mul(Gr.mul(Gr.phi[h], k.g), Gr.inv[h]), Gr.mul(Gr.mul(h, k.alpha), Gr.inv[h])};
  }

  /// Lexicographically minimal orbit element and the orbit size.
  std::pair<ClassKey, std::size_t> canonical(const ClassKey& k) const {
    std::set<ClassKey> orbit;
    for (Elem h = 0; h < order(); ++h) orbit.insert(transport(h, k));
    return {*orbit.begin(), orbit.size()};
  }

  Rational weight(Elem alpha) const {
    Rational w = 0;
    if (n == 0) return w;
    for (long c : eigen_exponents(*K, group.elems[alpha], xi_E, exponent)) w += c;
    return w / Rational(static_cast<long>(exponent));
  }

  std::string render_y(const std::vector<Code>& y) const {
    std::string s = "(";
    for (std::size_t i = 0; i < y.size(); ++i) s += (i ? "," : "") + K->str(y[i]);
    return s + ")";
  }
};

namespace detail {

inline std::uint32_t lcm32(std::uint32_t a, std::uint64_t b) { return static_cast<std::uint32_t>(std::lcm<std::uint64_t>(a, b)); }

/// Smallest m ≥ 1 with φ^{m-1}(g)···φ(g)·g = 1.
inline std::uint32_t twisted_order(const GroupWithFrobenius& G, Elem g) {
  Elem P = g, f = g;
  std::uint32_t m = 1;
  while (P != 0) {
    f = G.phi[f];
    P = G.mul(f, P);
    if (++m > 1000000) throw Error("twisted order does not terminate");
  }
  return m;
}

}  // namespace detail

inline QuotientStackDesc build_stack(const StackSpec& s) {
  if (!is_prime(s.p)) throw Error("stack spec: p must be prime");
  if (s.r < 1 || s.ext_degree < 1) throw Error("stack spec: r and ext_degree must be positive");
  if (s.n > 6) throw Error("stack spec: dimension too large");
  QuotientStackDesc st;
  st.name = s.name;
  st.p = static_cast<std::uint32_t>(s.p);
  st.r = s.r;
  st.q = ipow(s.p, s.r);
  st.n = s.n;
  const std::uint64_t q = st.q;
  bool have_xi = s.N > 0;
  if (have_xi && s.N % s.p == 0) throw Error("stack spec: p divides N");
  std::uint32_t sN = have_xi ? splitting_degree(q, s.N) : 1;
  std::uint32_t d = detail::lcm32(s.ext_degree, sN);
  auto Kd = make_field(s.p, s.r * d);
  Code xi_d = 1;
  if (have_xi) {
    auto Ksp = make_field(s.p, s.r * sN);
    xi_d = subfield_embedding(*Ksp, *Kd)[primitive_root(*Ksp, s.N)];
  }
  std::vector<Matrix> gens;
  if (!s.weights.empty()) {
    if (s.weights.size() != s.n) throw Error("stack spec: weights length must equal n");
    std::vector<Code> dg;
    for (long w : s.weights) dg.push_back(Kd->pow(xi_d, w));
    gens.push_back(Matrix::diagonal(dg));
  }
  for (const auto& m : s.generators) {
    if (m.size() != s.n) throw Error("stack spec: generator must be n x n");
    Matrix A(s.n, s.n);
    for (std::size_t i = 0; i < s.n; ++i) {
      if (m[i].size() != s.n) throw Error("stack spec: generator must be n x n");
      for (std::size_t j = 0; j < s.n; ++j) A(i, j) = parse_entry(*Kd, xi_d, have_xi, m[i][j]);
    }
    gens.push_back(A);
  }
  // μ_N on a point: the group is carried by its 1-dimensional faithful representation
  if (s.n == 0 && s.kind == "muN") gens = {Matrix::diagonal({xi_d})};
  const std::size_t rep_dim = gens.empty() ? s.n : gens[0].rows;
  auto grp = MatrixGroup::generate(Kd, rep_dim, s.r, gens);
  if (s.kind == "muN" && grp.order() != s.N) throw Error("stack spec: muN action must be faithful of order exactly N");
  std::uint64_t E = grp.G.exponent();
  std::uint32_t S = d;
  for (Elem g = 0; g < grp.order(); ++g) S = detail::lcm32(S, detail::twisted_order(grp.G, g));
  S = detail::lcm32(S, splitting_degree(q, E));
  S = detail::lcm32(S, splitting_degree(q, E * (q - 1)));
  st.S = S;
  st.K = make_field(s.p, s.r * S);
  auto emb = subfield_embedding(*Kd, *st.K);
  st.group = grp.embedded(st.K, emb);
  st.exponent = E;
  if (s.kind == "muN") {
    st.mu_N = s.N;
    st.mu_gen = grp.index_of(gens[0]);
    st.xi_E = emb[xi_d];
    // label μ_N elements by powers of ξ
    Elem a = 0;
    for (std::uint64_t k = 0; k < s.N; ++k, a = st.group.G.mul(a, st.mu_gen))
      st.group.G.labels[a] = k == 0 ? "1" : (k == 1 ? "xi" : "xi^" + std::to_string(k));
  } else if (have_xi && s.N % E == 0) {
    st.xi_E = st.K->pow(emb[xi_d], static_cast<std::int64_t>(s.N / E));
  } else {
    auto KE = make_field(s.p, s.r * splitting_degree(q, E));
    st.xi_E = subfield_embedding(*KE, *st.K)[primitive_root(*KE, E)];
  }
  return st;
}

inline QuotientStackDesc build_stack(const nlohmann::json& j) { return build_stack(parse_stack_spec(j)); }

/// [A^n/μ_N] with μ_N acting by diag(ξ^{w_1}, ..., ξ^{w_n}).
inline QuotientStackDesc mu_diagonal_stack(std::uint64_t q, std::uint64_t N, std::vector<long> weights, std::string name = "") {
  auto [p, r] = prime_power(q);
  StackSpec s;
  s.name = name.empty() ? "mu" + std::to_string(N) : name;
  s.p = p;
  s.r = r;
  s.n = weights.size();
  s.kind = "muN";
  s.N = N;
  s.weights = std::move(weights);
  return build_stack(s);
}

/// [A^n/Γ] for Γ generated by the given matrices (entries as in stack specs).
inline QuotientStackDesc matrix_stack(std::uint64_t q, std::vector<std::vector<std::vector<std::string>>> gens, std::uint64_t N = 0,
                                      std::string name = "matrix") {
  auto [p, r] = prime_power(q);
  StackSpec s;
  s.name = std::move(name);
  s.p = p;
  s.r = r;
  s.n = gens.empty() ? 0 : gens[0].size();
  s.kind = "matrix_list";
  s.N = N;
  s.generators = std::move(gens);
  return build_stack(s);
}

/// The same stack with every group element replaced by P A P^{-1}, P ∈ GL_n(F_q).
inline QuotientStackDesc conjugate_stack(const QuotientStackDesc& st, const Matrix& P) {
  const Field& K = *st.K;
  if (mat_frob(K, P, st.r) != P) throw Error("conjugate_stack: P must be F_q-rational");
  Matrix Pi = inverse(K, P);
  std::vector<Matrix> gens;
  for (const auto& A : st.group.elems) gens.push_back(mat_mul(K, mat_mul(K, P, A), Pi));
  QuotientStackDesc out = st;
  out.group = MatrixGroup::generate(st.K, st.n, st.r, gens);
  if (st.mu_N) out.mu_gen = out.group.index_of(gens[st.mu_gen]);
  return out;
}

// ---------------------------------------------------------------------------
// Twisted inertia

struct InertiaClass {
  std::vector<Code> y;
  Elem g = 0;
  Elem alpha = 0;
  Rational weight;
  std::size_t aut_order = 1;
  ClassKey key() const { return {y, g, alpha}; }
};

/**
 * @brief All classes (y, g, α) with φ(y) = g·y, α·y = y, g^{-1}φ(α)g = α^q, modulo
 * (y, g, α) ~ (hy, φ(h)gh^{-1}, hαh^{-1}); sorted by canonical representative.
 */
inline std::vector<InertiaClass> twisted_inertia(const QuotientStackDesc& st, std::uint64_t max_cells = 100000000, unsigned jobs = 1) {
  const std::size_t m = st.order();
  if (ipow(st.q, static_cast<unsigned>(st.n)) * m > max_cells) throw GuardError("twisted_inertia: enumeration exceeds cell budget");
  // per twist g: canonical keys of all triples over Y_g
  auto per_g = parallel_map(jobs, m, [&](std::uint64_t gi) {
    Elem g = static_cast<Elem>(gi);
    const Matrix& Ag = st.group.elems[g];
    auto Y = fp_linear_kernel(
        *st.K, st.n,
        [&](const std::vector<Code>& y) {
          auto a = st.phi(y);
          auto b = mat_vec(*st.K, Ag, y);
          for (std::size_t i = 0; i < a.size(); ++i) a[i] = st.K->sub(a[i], b[i]);
          return a;
        },
        max_cells);
    if (Y.size() != ipow(st.q, static_cast<unsigned>(st.n))) throw Error("twisted_inertia: twisted fixed locus has the wrong size");
    std::vector<Elem> alphas;
    for (Elem a = 0; a < m; ++a)
      if (st.alpha_compatible(g, a)) alphas.push_back(a);
    std::map<ClassKey, std::size_t> found;
    std::set<ClassKey> seen;
    for (const auto& y : Y)
      for (Elem a : alphas) {
        if (st.act(a, y) != y) continue;
        ClassKey k{y, g, a};
        if (seen.count(k)) continue;
        std::set<ClassKey> orbit;
        for (Elem h = 0; h < m; ++h) orbit.insert(st.transport(h, k));
        for (const auto& o : orbit)
          if (o.g == g) seen.insert(o);
        found.emplace(*orbit.begin(), orbit.size());
      }
    return found;
  });
  std::map<ClassKey, std::size_t> all;
  for (auto& f : per_g) all.insert(f.begin(), f.end());
  std::map<Elem, Rational> wcache;
  std::vector<InertiaClass> out;
  for (const auto& [k, osize] : all) {
    if (!wcache.count(k.alpha)) wcache[k.alpha] = st.weight(k.alpha);
    out.push_back({k.y, k.g, k.alpha, wcache[k.alpha], m / osize});
  }
  return out;
}

inline VolumeValue fiber_volume(const InertiaClass& c, std::uint64_t q) {
  return VolumeValue::q_power(q, -c.weight) / VolumeValue(Rational(static_cast<long>(c.aut_order)));
}

struct StringyReport {
  std::vector<InertiaClass> classes;
  VolumeValue stringy;  ///< Σ q^{-w}/aut
  VolumeValue naive;    ///< (Σ 1/aut)/q^d
  bool agree = false;
};

inline StringyReport stringy_volume(const QuotientStackDesc& st, std::uint64_t max_cells = 100000000, unsigned jobs = 1) {
  StringyReport R;
  R.classes = twisted_inertia(st, max_cells, jobs);
  R.stringy = VolumeValue::with_base(st.q, 0);
  Rational cnt = 0;
  for (const auto& c : R.classes) {
    R.stringy += fiber_volume(c, st.q);
    cnt += Rational(1, static_cast<long>(c.aut_order));
  }
  R.naive = VolumeValue::q_power(st.q, -Rational(static_cast<long>(st.n))) * VolumeValue(cnt);
  R.agree = R.stringy == R.naive;
  return R;
}

// ---------------------------------------------------------------------------
// Specialization

/// μ_N-equivariant O_L-point: coords(ζu) = ρ(ζ)·coords(u), with rho = ρ(ξ_N).
struct EquivariantPoint {
  std::vector<TruncatedSeries> coords;
  Elem rho = 0;
};

inline InertiaClass specialize(const EquivariantPoint& pt, const QuotientStackDesc& st) {
  if (pt.coords.size() != st.n) throw Error("specialize: wrong number of coordinates");
  if (st.n == 0) throw Error("specialize: empty point");
  const int N = pt.coords[0].ram_index();
  for (const auto& x : pt.coords) {
    if (x.ram_index() != N) throw Error("specialize: coordinates disagree on ramification");
    if (x.field() != st.K) throw Error("specialize: coordinates must live over the stack's working field");
    if (x.valuation_known() && x.val() < 0) throw Error("specialize: point is not integral");
  }
  if ((st.K->q - 1) % static_cast<std::uint64_t>(N) != 0) throw Error("specialize: working field lacks mu_N");
  Code xi = st.root_of_order(static_cast<std::uint64_t>(N));
  auto apply = [&](Elem h, const std::vector<TruncatedSeries>& x) {
    std::vector<TruncatedSeries> out;
    const Matrix& A = st.group.elems[h];
    for (std::size_t i = 0; i < st.n; ++i) {
      TruncatedSeries s(st.K, N);
      for (std::size_t j = 0; j < st.n; ++j)
        if (A(i, j)) s = s + x[j].scale(A(i, j));
      out.push_back(s);
    }
    return out;
  };
  auto same = [](const std::vector<TruncatedSeries>& a, const std::vector<TruncatedSeries>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!(a[i] - b[i]).is_zero()) return false;
    return true;
  };
  std::vector<TruncatedSeries> moved;
  for (const auto& x : pt.coords) moved.push_back(x.act(xi));
  if (!same(moved, apply(pt.rho, pt.coords))) throw Error("specialize: point is not equivariant for the declared embedding");
  std::vector<Code> y;
  for (const auto& x : pt.coords) y.push_back(x.valuation_known() && x.val() == 0 ? x.leading() : 0);
  std::vector<TruncatedSeries> fx;
  for (const auto& x : pt.coords) fx.push_back(x.frobenius(st.r));
  for (Elem g = 0; g < st.order(); ++g) {
    if (!same(fx, apply(g, pt.coords))) continue;
    ClassKey k{y, g, pt.rho};
    if (!st.valid_triple(k)) continue;
    auto [rep, osize] = st.canonical(k);
    return {rep.y, rep.g, rep.alpha, st.weight(rep.alpha), st.order() / osize};
  }
  throw Error("specialize: no descent datum g with phi(x) = g x");
}

// ---------------------------------------------------------------------------
// Independent fiber-volume oracle

struct OracleResult {
  std::string route;  ///< "kummer" (cyclic, ramified) or "unramified" (level-1 cells, exact)
  std::map<ClassKey, IntervalVolume> fibers;
  VolumeValue total;  ///< exact coarse-space total
  VolumeValue tail;   ///< total minus everything enumerated
  IntervalVolume of(const InertiaClass& c) const {
    auto it = fibers.find(c.key());
    if (it != fibers.end()) return it->second;
    // a class never hit by an enumerated shell owns at most the tail
    return {VolumeValue(0), tail, true};
  }
};

namespace detail {

/// Lower-triangular basis (rows) of {m ∈ Z^n : Σ m_i a_i ≡ 0 mod N} with positive diagonal.
inline std::vector<std::vector<long>> invariant_lattice(const std::vector<long>& a, long N) {
  const std::size_t n = a.size();
  std::vector<std::vector<long>> M;
  long g = N;
  for (std::size_t j = 0; j < n; ++j) {
    long d = g / std::gcd(g, floor_mod(a[j], N));
    if (d == 0) d = 1;
    long target = floor_mod(-d * a[j], N);
    std::vector<long> row(n, 0);
    row[j] = d;
    // brute-force the earlier coordinates in [0, N)
    std::vector<long> m(j, 0);
    bool ok = false;
    long total = 1;
    for (std::size_t i = 0; i < j; ++i) total *= N;
    for (long idx = 0; idx < total && !ok; ++idx) {
      long x = idx, s = 0;
      for (std::size_t i = 0; i < j; ++i, x /= N) {
        m[i] = x % N;
        s += m[i] * a[i];
      }
      if (floor_mod(s, N) == target) ok = true;
    }
    if (!ok) throw Error("invariant_lattice: no solution");
    for (std::size_t i = 0; i < j; ++i) row[i] = m[i];
    M.push_back(row);
    g = std::gcd(g, floor_mod(a[j], N));
  }
  return M;
}

/// Inverse of a modulo m (gcd(a, m) = 1); 0 when m = 1.
inline long inv_mod_long(long a, long m) {
  if (m == 1) return 0;
  long g = m, x = 0, x1 = 1, b = floor_mod(a, m);
  while (b) {
    long t = g / b;
    std::tie(g, b) = std::make_pair(b, g - t * b);
    std::tie(x, x1) = std::make_pair(x1, x - t * x1);
  }
  return floor_mod(x, m);
}

/// Some c ∈ (K^×)^n with Π_i c_i^{M_ji} = ℓ_j for all j (M lower triangular).
inline std::optional<std::vector<Code>> solve_monomial(const Field& K, const std::vector<std::vector<long>>& M, const std::vector<Code>& ell) {
  const std::size_t n = M.size();
  const long Q1 = static_cast<long>(K.q - 1);
  std::vector<long> L(n, 0);
  std::function<bool(std::size_t)> rec = [&](std::size_t j) -> bool {
    if (j == n) return true;
    long rhs = static_cast<long>(K.log(ell[j]));
    for (std::size_t i = 0; i < j; ++i) rhs -= M[j][i] % Q1 * L[i] % Q1;
    rhs = floor_mod(rhs, Q1);
    long d = M[j][j];
    long g = std::gcd(d, Q1);
    if (rhs % g) return false;
    long mod = Q1 / g;
    long base = static_cast<long>(static_cast<__int128>(rhs / g) * inv_mod_long(d / g, mod) % mod);
    for (long t = 0; t < g; ++t) {
      L[j] = base + t * mod;
      if (rec(j + 1)) return true;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  std::vector<Code> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = K.pow(K.generator(), L[i]);
  return c;
}

}  // namespace detail

/**
 * @brief Volumes of the specialization fibers, computed on the coarse space.
 *
 * Cyclic Γ with φ(γ) = γ^q: coarse torus coordinates U = x^m (m in the invariant
 * lattice) are enumerated shell by shell (valuations of x below `level`, leading units
 * of U in F_q^×). Each shell is assigned its class by lifting to x = c·u^{Nv} and
 * reading off (reduction, Frobenius descent datum, μ_N-monodromy). The descended form
 * contributes q^{-|v|-n} per shell; the unenumerated tail is bounded by the exact total.
 *
 * Γ without ramified torsors: every fiber is a union of residue discs of twisted forms,
 * each of volume q^{-n}/|{h : φ(h)g = gh}|, so the answer is exact at level 1.
 */
inline OracleResult fiber_volume_oracle(const QuotientStackDesc& st, int level, std::uint64_t max_cells = 100000000) {
  const auto& Gr = st.G();
  const std::size_t m = st.order();
  const Field& K = *st.K;
  const std::uint64_t q = st.q;
  const long n = static_cast<long>(st.n);
  OracleResult R;
  bool ramified = false;
  for (Elem g = 0; g < m && !ramified; ++g)
    for (Elem a = 1; a < m; ++a)
      if (st.alpha_compatible(g, a)) ramified = true;

  if (!ramified) {
    R.route = "unramified";
    auto Fq = subfield_elements(K, st.r);
    std::set<Elem> reps;
    for (Elem g = 0; g < m; ++g) {
      Elem best = g;
      for (Elem h = 0; h < m; ++h) best = std::min(best, Gr.mul(Gr.mul(Gr.phi[h], g), Gr.inv[h]));
      reps.insert(best);
    }
    std::map<ClassKey, Rational> acc;
    for (Elem g : reps) {
      auto Y = fp_linear_kernel(
          K, st.n,
          [&](const std::vector<Code>& y) {
            auto a = st.phi(y);
            auto b = st.act(g, y);
            for (std::size_t i = 0; i < a.size(); ++i) a[i] = K.sub(a[i], b[i]);
            return a;
          },
          max_cells);
      std::vector<std::vector<Code>> basis;
      for (const auto& y : Y) {
        auto trial = basis;
        trial.push_back(y);
        if (rank(K, from_columns(trial)) == trial.size()) basis = trial;
        if (basis.size() == st.n) break;
      }
      std::size_t twisted_fixed = 0;
      for (Elem h = 0; h < m; ++h)
        if (Gr.mul(Gr.phi[h], g) == Gr.mul(g, h)) ++twisted_fixed;
      Rational cell(1, static_cast<long>(twisted_fixed));
      std::uint64_t cells = ipow(q, static_cast<unsigned>(n));
      for (std::uint64_t idx = 0; idx < cells; ++idx) {
        std::vector<Code> y(st.n, 0);
        std::uint64_t x = idx;
        for (std::size_t b = 0; b < st.n; ++b, x /= q) {
          Code c = Fq[x % q];
          for (std::size_t i = 0; i < st.n; ++i) y[i] = K.add(y[i], K.mul(c, basis[b][i]));
        }
        auto [rep, os] = st.canonical(ClassKey{y, g, 0});
        (void)os;
        acc[rep] += cell;
      }
    }
    R.total = VolumeValue::with_base(q, 0);
    R.tail = VolumeValue::with_base(q, 0);
    for (auto& [k, v] : acc) {
      VolumeValue vol = VolumeValue::q_power(q, -Rational(n)) * VolumeValue(v);
      R.fibers[k] = {vol, vol, true};
      R.total += vol;
    }
    return R;
  }

  // Kummer route: Γ cyclic with φ(γ0) = γ0^q and an F_q-rational eigenbasis
  Elem gamma0 = 0;
  for (Elem a = 0; a < m; ++a)
    if (Gr.elem_order(a) == m) {
      gamma0 = a;
      break;
    }
  if (Gr.elem_order(gamma0) != m) throw Error("fiber_volume_oracle: unsupported group shape (not cyclic)");
  if (Gr.phi[gamma0] != Gr.pow(gamma0, static_cast<long>(q % m))) throw Error("fiber_volume_oracle: unsupported group shape (Frobenius is not q-th power)");
  R.route = "kummer";
  const long N = static_cast<long>(m);
  Code xi = st.root_of_order(static_cast<std::uint64_t>(N));
  const Matrix& A0 = st.group.elems[gamma0];
  std::vector<std::vector<Code>> cols;
  std::vector<long> a;
  Code lam = 1;
  for (long k = 0; k < N; ++k, lam = K.mul(lam, xi)) {
    auto ker = kernel(K, mat_sub(K, A0, mat_scale(K, Matrix::identity(st.n), lam)));
    for (auto& v : ker) {
      for (Code c : v)
        if (K.frob(c, st.r) != c) throw Error("fiber_volume_oracle: unsupported group shape (eigenbasis not F_q-rational)");
      cols.push_back(v);
      a.push_back(k);
    }
  }
  if (static_cast<long>(cols.size()) != n) throw Error("fiber_volume_oracle: generator not diagonalizable");
  Matrix V = from_columns(cols), Vi = inverse(K, V);
  auto M = detail::invariant_lattice(a, N);
  const long L = level;
  if (ipow(static_cast<std::uint64_t>(L), static_cast<unsigned>(n)) * static_cast<std::uint64_t>(N) > max_cells)
    throw GuardError("fiber_volume_oracle: enumeration exceeds cell budget");
  std::vector<Code> units;
  for (Code c = 1; c < K.q; ++c)
    if (K.frob(c, st.r) == c) units.push_back(c);
  std::uint64_t nell = ipow(units.size(), static_cast<unsigned>(n));
  // class tally per (k, zero pattern): class -> number of leading-unit tuples
  std::map<std::pair<long, unsigned>, std::map<ClassKey, long>> memo;
  auto tally = [&](long k, unsigned pattern) -> const std::map<ClassKey, long>& {
    auto key = std::make_pair(k, pattern);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::map<ClassKey, long> t;
    Elem alpha = Gr.pow(gamma0, k);
    for (std::uint64_t idx = 0; idx < nell; ++idx) {
      std::vector<Code> ell(st.n);
      std::uint64_t x = idx;
      for (long j = 0; j < n; ++j, x /= units.size()) ell[static_cast<std::size_t>(j)] = units[x % units.size()];
      auto c = detail::solve_monomial(K, M, ell);
      if (!c) throw Error("fiber_volume_oracle: Kummer lift failed (working field too small)");
      std::vector<Code> ye(st.n), dg(st.n);
      for (long i = 0; i < n; ++i) {
        ye[static_cast<std::size_t>(i)] = (pattern >> i) & 1 ? 0 : (*c)[static_cast<std::size_t>(i)];
        dg[static_cast<std::size_t>(i)] = K.pow((*c)[static_cast<std::size_t>(i)], static_cast<std::int64_t>(q - 1));
      }
      Matrix gm = mat_mul(K, mat_mul(K, V, Matrix::diagonal(dg)), Vi);
      if (!st.group.contains(gm)) throw Error("fiber_volume_oracle: descent datum outside the group");
      ClassKey ck{mat_vec(K, V, ye), st.group.index_of(gm), alpha};
      if (!st.valid_triple(ck)) throw Error("fiber_volume_oracle: lifted point violates the triple relations");
      t[st.canonical(ck).first] += 1;
    }
    return memo.emplace(key, std::move(t)).first->second;
  };
  std::map<ClassKey, detail::MassAccumulator> acc;
  for (long k = 0; k < N; ++k) {
    std::vector<long> e0(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) e0[static_cast<std::size_t>(i)] = floor_mod(k * a[static_cast<std::size_t>(i)], N);
    // z_i ranges so that e_i = e0_i + N z_i < N L
    std::vector<long> z(static_cast<std::size_t>(n), 0);
    while (true) {
      bool inside = true;
      long tot = 0;
      unsigned pattern = 0;
      for (long i = 0; i < n; ++i) {
        long e = e0[static_cast<std::size_t>(i)] + N * z[static_cast<std::size_t>(i)];
        if (e >= N * L) inside = false;
        if (e > 0) pattern |= 1u << i;
        tot += e;
      }
      if (inside) {
        for (const auto& [ck, cnt] : tally(k, pattern)) acc[ck].add(Rational(tot, N) + n, cnt);
      }
      long i = 0;
      for (; i < n; ++i) {
        if (++z[static_cast<std::size_t>(i)] * N + e0[static_cast<std::size_t>(i)] < N * L) break;
        z[static_cast<std::size_t>(i)] = 0;
      }
      if (i == n) break;
    }
  }
  R.total = VolumeValue::with_base(q, 0);
  for (long k = 0; k < N; ++k) {
    Rational s = 0;
    for (long i = 0; i < n; ++i) s += Rational(floor_mod(k * a[static_cast<std::size_t>(i)], N), N);
    R.total += VolumeValue::q_power(q, -s);
  }
  VolumeValue inside = VolumeValue::with_base(q, 0);
  std::map<ClassKey, VolumeValue> vals;
  for (auto& [ck, ma] : acc) {
    vals[ck] = ma.value(q);
    inside += vals[ck];
  }
  R.tail = R.total - inside;
  for (auto& [ck, v] : vals) R.fibers[ck] = {v, v + R.tail, true};
  return R;
}

/// Single-class convenience form.
inline IntervalVolume fiber_volume_oracle(const InertiaClass& cls, const QuotientStackDesc& st, int level) {
  return fiber_volume_oracle(st, level).of(cls);
}

}  // namespace padicvol
