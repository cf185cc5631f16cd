#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclo.hpp"

namespace padicvol {

/// Z/d_1 × ... × Z/d_k with d_1 | d_2 | ... | d_k; elements indexed in mixed radix (last coordinate fastest).
struct FiniteAbelianGroup {
  std::vector<std::uint64_t> d;

  FiniteAbelianGroup() = default;
  explicit FiniteAbelianGroup(std::vector<std::uint64_t> factors) : d(std::move(factors)) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] < 2) throw Error("abelian group: invariant factors must be at least 2");
      if (i > 0 && d[i] % d[i - 1] != 0) throw Error("abelian group: invariant factors must form a divisor chain");
    }
  }

  std::size_t order() const {
    std::size_t n = 1;
    for (auto x : d) n *= x;
    return n;
  }
  std::uint64_t exponent() const { return d.empty() ? 1 : d.back(); }
  std::vector<std::uint64_t> element(std::size_t idx) const {
    std::vector<std::uint64_t> v(d.size());
    for (std::size_t i = d.size(); i-- > 0; idx /= d[i]) v[i] = idx % d[i];
    return v;
  }
  std::size_t index_of(const std::vector<std::uint64_t>& v) const {
    if (v.size() != d.size()) throw Error("abelian group: wrong tuple length");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < d.size(); ++i) idx = idx * d[i] + v[i] % d[i];
    return idx;
  }
  std::size_t add(std::size_t a, std::size_t b) const {
    auto x = element(a), y = element(b);
    for (std::size_t i = 0; i < d.size(); ++i) x[i] = (x[i] + y[i]) % d[i];
    return index_of(x);
  }
  std::string label(std::size_t idx) const {
    auto v = element(idx);
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
  }
  std::size_t parse_label(const std::string& s) const {
    for (std::size_t i = 0; i < order(); ++i)
      if (label(i) == s) return i;
    throw Error("abelian group: unknown element '" + s + "'");
  }
  bool operator==(const FiniteAbelianGroup& o) const { return d == o.d; }
};

/**
 * @brief The character t ↦ exp(2πi Σ c_i t_i / d_i), indexed like the group itself.
 */
struct Character {
  FiniteAbelianGroup group;
  std::size_t index = 0;

  /// χ(t) as an element of Q/Z.
  Rational value(std::size_t t) const {
    auto c = group.element(index), x = group.element(t);
    Rational s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += Rational(static_cast<long>(c[i] * x[i] % group.d[i]), static_cast<long>(group.d[i]));
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
    return s - fl;
  }
  /// χ(t) as ζ_M^k in the context, which must have exponent(A) | M.
  CycloValue at(const CycloRef& ctx, std::size_t t) const {
    return CycloValue::root_of_unity(ctx, value(t));
  }
  bool trivial() const { return index == 0; }
};

inline std::vector<Character> characters(const FiniteAbelianGroup& A) {
  std::vector<Character> out;
  for (std::size_t i = 0; i < A.order(); ++i) out.push_back({A, i});
  return out;
}

/// t ↦ N_t with exact values.
struct CountTable {
  FiniteAbelianGroup group;
  std::vector<CycloValue> values;
};

/// χ ↦ (1/|A|) Σ_t χ^{-1}(t) N_t, indexed by character.
inline std::vector<CycloValue> fourier_transform(const CountTable& T) {
  const auto& A = T.group;
  if (T.values.size() != A.order()) throw Error("fourier_transform: table size does not match the group");
  const auto& ctx = T.values.at(0).context();
  std::vector<CycloValue> out;
  for (const auto& chi : characters(A)) {
    CycloValue s(ctx);
    for (std::size_t t = 0; t < A.order(); ++t) {
      s += CycloValue::root_of_unity(ctx, -chi.value(t)) * T.values[t];
    }
    out.push_back(s.scale(Rational(1, static_cast<long>(A.order()))));
  }
  return out;
}

/// N_t = Σ_χ χ(t)·hat(χ).
inline CountTable fourier_inverse(const FiniteAbelianGroup& A, const std::vector<CycloValue>& hat) {
  if (hat.size() != A.order()) throw Error("fourier_inverse: size mismatch");
  const auto& ctx = hat.at(0).context();
  CountTable T{A, {}};
  for (std::size_t t = 0; t < A.order(); ++t) {
    CycloValue s(ctx);
    for (const auto& chi : characters(A)) s += chi.at(ctx, t) * hat[chi.index];
    T.values.push_back(s);
  }
  return T;
}

/// (1/|A|) Σ_t N_t, the trivial-character coefficient.
inline CycloValue stable_count(const CountTable& T) { return fourier_transform(T).at(0); }

// ---------------------------------------------------------------------------
// Main identity on synthetic data

/**
 * @brief Both sides of the twisted main identity.
 *
 * G side: twists t ∈ A, endoscopic types κ ∈ B^∨ with weights F(κ) and counts N[t][κ].
 * Ĝ side: twists s ∈ B, types ν ∈ A^∨ with weights Fhat(ν) and counts M[s][ν].
 * The identity asks, for every (s, t),
 *   Σ_κ κ(s) q^{−F(κ)} N[t][κ] = Σ_ν ν(t) q^{−Fhat(ν)} M[s][ν].
 */
struct MainIdentityData {
  std::uint64_t q = 2;
  FiniteAbelianGroup A;  ///< G-side twist group
  FiniteAbelianGroup B;  ///< Ĝ-side twist group
  CycloRef ctx;
  std::vector<Rational> F;     ///< indexed by κ ∈ B^∨; F[0] = F(1)
  std::vector<Rational> Fhat;  ///< indexed by ν ∈ A^∨
  std::vector<std::vector<CycloValue>> N;  ///< N[t][κ]
  std::vector<std::vector<CycloValue>> M;  ///< M[s][ν]

  void validate() const {
    if (!ctx) throw Error("main identity: missing context");
    if (F.size() != B.order() || Fhat.size() != A.order()) throw Error("main identity: weight tables have the wrong size");
    if (N.size() != A.order() || M.size() != B.order()) throw Error("main identity: count tables have the wrong size");
    for (const auto& row : N)
      if (row.size() != B.order()) throw Error("main identity: G-side row has the wrong size");
    for (const auto& row : M)
      if (row.size() != A.order()) throw Error("main identity: dual-side row has the wrong size");
    if (ctx->M % std::lcm(A.exponent(), B.exponent()) != 0) throw Error("main identity: context lacks roots of unity");
  }
};

/// The context with M = lcm of exponents and D = lcm of weight denominators.
inline CycloRef context_for(std::uint64_t q, const FiniteAbelianGroup& A, const FiniteAbelianGroup& B, const std::vector<Rational>& F,
                            const std::vector<Rational>& Fhat) {
  std::uint64_t D = 1;
  for (const auto* w : {&F, &Fhat})
    for (const auto& x : *w) D = std::lcm(D, static_cast<std::uint64_t>(x.get_den().get_ui()));
  return make_cyclo_context(std::lcm(A.exponent(), B.exponent()), D, q);
}

inline CycloValue main_lhs(const MainIdentityData& D, std::size_t s, std::size_t t) {
  CycloValue v(D.ctx);
  for (std::size_t k = 0; k < D.B.order(); ++k)
    if (!D.N[t][k].is_zero()) v += Character{D.B, k}.at(D.ctx, s) * CycloValue::q_power(D.ctx, -D.F[k]) * D.N[t][k];
  return v;
}

inline CycloValue main_rhs(const MainIdentityData& D, std::size_t s, std::size_t t) {
  CycloValue v(D.ctx);
  for (std::size_t n = 0; n < D.A.order(); ++n)
    if (!D.M[s][n].is_zero()) v += Character{D.A, n}.at(D.ctx, t) * CycloValue::q_power(D.ctx, -D.Fhat[n]) * D.M[s][n];
  return v;
}

using TwistPair = std::pair<std::size_t, std::size_t>;  ///< (s, t)

struct MainIdentityReport {
  std::size_t pairs_checked = 0;
  std::set<TwistPair> failing;
  bool ok() const { return failing.empty(); }
};

inline MainIdentityReport verify_main_identity(const MainIdentityData& D) {
  D.validate();
  MainIdentityReport r;
  for (std::size_t s = 0; s < D.B.order(); ++s)
    for (std::size_t t = 0; t < D.A.order(); ++t) {
      ++r.pairs_checked;
      if (main_lhs(D, s, t) != main_rhs(D, s, t)) r.failing.insert({s, t});
    }
  return r;
}

struct StableReport {
  CycloValue double_sum_lhs;  ///< Σ_{s,t} LHS
  CycloValue double_sum_rhs;
  CycloValue collapsed_lhs;  ///< |A||B| q^{−F(1)} #^stab_G after orthogonality
  CycloValue collapsed_rhs;
  CycloValue stable_G;     ///< (1/|A|) Σ_t N[t][1]
  CycloValue stable_Ghat;  ///< (1/|B|) Σ_s M[s][1]
  CycloValue lhs;          ///< #^stab_G
  CycloValue rhs;          ///< q^{F(1) − Fhat(1)} #^stab_Ĝ
  bool orthogonality_ok = false;
  bool equal = false;
};

inline CycloValue column_average(const std::vector<std::vector<CycloValue>>& T, std::size_t col, const CycloRef& ctx,
                                 const std::vector<Rational>* chi_exp = nullptr) {
  CycloValue s(ctx);
  for (std::size_t r = 0; r < T.size(); ++r) {
    CycloValue v = T[r][col];
    if (chi_exp) v = CycloValue::root_of_unity(ctx, -(*chi_exp)[r]) * v;
    s += v;
  }
  return s.scale(Rational(1, static_cast<long>(T.size())));
}

/**
 * @brief Sums the identity over all (s, t) and collapses κ ≠ 1 by orthogonality.
 *
 * Both the raw double sums and their collapsed forms are returned, so the orthogonality step is
 * itself checked.
 */
inline StableReport derive_stable_equality(const MainIdentityData& D) {
  D.validate();
  const auto& ctx = D.ctx;
  const Rational AB(static_cast<long>(D.A.order() * D.B.order()));
  StableReport r;
  r.double_sum_lhs = CycloValue(ctx);
  r.double_sum_rhs = CycloValue(ctx);
  for (std::size_t s = 0; s < D.B.order(); ++s)
    for (std::size_t t = 0; t < D.A.order(); ++t) {
      r.double_sum_lhs += main_lhs(D, s, t);
      r.double_sum_rhs += main_rhs(D, s, t);
    }
  r.stable_G = column_average(D.N, 0, ctx);
  r.stable_Ghat = column_average(D.M, 0, ctx);
  r.collapsed_lhs = (CycloValue::q_power(ctx, -D.F[0]) * r.stable_G).scale(AB);
  r.collapsed_rhs = (CycloValue::q_power(ctx, -D.Fhat[0]) * r.stable_Ghat).scale(AB);
  r.orthogonality_ok = r.collapsed_lhs == r.double_sum_lhs && r.collapsed_rhs == r.double_sum_rhs;
  r.lhs = r.stable_G;
  r.rhs = CycloValue::q_power(ctx, D.F[0] - D.Fhat[0]) * r.stable_Ghat;
  r.equal = r.orthogonality_ok && r.double_sum_lhs == r.double_sum_rhs && r.lhs == r.rhs;
  return r;
}

struct KappaReport {
  std::size_t lambda = 0;  ///< character of A, the G-side twist group
  CycloValue double_sum_lhs;  ///< Σ_{s,t} λ^{-1}(t) LHS
  CycloValue double_sum_rhs;
  CycloValue isotypic;      ///< #^λ_G = (1/|A|) Σ_t λ^{-1}(t) N[t][1]
  CycloValue block_stable;  ///< (1/|B|) Σ_s M[s][λ]
  CycloValue transfer;      ///< q^{F(1) − Fhat(λ)}
  CycloValue lhs;           ///< isotypic
  CycloValue rhs;           ///< transfer · block_stable
  bool block_present = false;
  bool orthogonality_ok = false;
  bool equal = false;
};

inline KappaReport derive_kappa_identity(const MainIdentityData& D, std::size_t lambda) {
  D.validate();
  if (lambda >= D.A.order()) throw Error("derive_kappa_identity: lambda is not a character of the twist group");
  const auto& ctx = D.ctx;
  const Rational AB(static_cast<long>(D.A.order() * D.B.order()));
  Character lam{D.A, lambda};
  std::vector<Rational> lam_exp;
  for (std::size_t t = 0; t < D.A.order(); ++t) lam_exp.push_back(lam.value(t));
  KappaReport r;
  r.lambda = lambda;
  r.double_sum_lhs = CycloValue(ctx);
  r.double_sum_rhs = CycloValue(ctx);
  for (std::size_t s = 0; s < D.B.order(); ++s)
    for (std::size_t t = 0; t < D.A.order(); ++t) {
      CycloValue w = CycloValue::root_of_unity(ctx, -lam_exp[t]);
      r.double_sum_lhs += w * main_lhs(D, s, t);
      r.double_sum_rhs += w * main_rhs(D, s, t);
    }
  r.isotypic = column_average(D.N, 0, ctx, &lam_exp);
  r.block_stable = column_average(D.M, lambda, ctx);
  for (const auto& row : D.M) r.block_present = r.block_present || !row[lambda].is_zero();
  const CycloValue collapsed_lhs = (CycloValue::q_power(ctx, -D.F[0]) * r.isotypic).scale(AB);
  const CycloValue collapsed_rhs = (CycloValue::q_power(ctx, -D.Fhat[lambda]) * r.block_stable).scale(AB);
  r.orthogonality_ok = collapsed_lhs == r.double_sum_lhs && collapsed_rhs == r.double_sum_rhs;
  r.transfer = CycloValue::q_power(ctx, D.F[0] - D.Fhat[lambda]);
  r.lhs = r.isotypic;
  r.rhs = r.transfer * r.block_stable;
  r.equal = r.orthogonality_ok && r.double_sum_lhs == r.double_sum_rhs && r.lhs == r.rhs;
  return r;
}

// ---------------------------------------------------------------------------
// Synthetic data

/**
 * @brief Random data satisfying the identity by construction.
 *
 * Picks a joint table C(κ, ν) and sets N[t][κ] = q^{F(κ)} Σ_ν ν(t) C(κ,ν) and
 * M[s][ν] = q^{Fhat(ν)} Σ_κ κ(s) C(κ,ν); both sides then equal Σ_{κ,ν} κ(s)ν(t)C(κ,ν).
 * Entries of C are q^{−F(κ)−Fhat(ν)} times small integers; a `density` fraction is nonzero.
 */
inline MainIdentityData mirror_generator(std::uint64_t q, FiniteAbelianGroup A, FiniteAbelianGroup B, std::vector<Rational> F,
                                         std::vector<Rational> Fhat, std::uint64_t seed, double density = 0.5, long range = 5) {
  MainIdentityData D;
  D.q = q;
  D.A = std::move(A);
  D.B = std::move(B);
  D.F = std::move(F);
  D.Fhat = std::move(Fhat);
  D.ctx = context_for(q, D.A, D.B, D.F, D.Fhat);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<long> val(-range, range);
  const std::size_t nk = D.B.order(), nn = D.A.order();
  std::vector<std::vector<CycloValue>> C(nk, std::vector<CycloValue>(nn, CycloValue(D.ctx)));
  for (std::size_t k = 0; k < nk; ++k)
    for (std::size_t n = 0; n < nn; ++n)
      if (coin(rng) < density || (k == 0 && n == 0))
        C[k][n] = CycloValue::q_power(D.ctx, -D.F[k] - D.Fhat[n]).scale(Rational(val(rng)));
  D.N.assign(nn, std::vector<CycloValue>(nk, CycloValue(D.ctx)));
  D.M.assign(nk, std::vector<CycloValue>(nn, CycloValue(D.ctx)));
  for (std::size_t t = 0; t < nn; ++t)
    for (std::size_t k = 0; k < nk; ++k) {
      CycloValue s(D.ctx);
      for (std::size_t n = 0; n < nn; ++n) s += Character{D.A, n}.at(D.ctx, t) * C[k][n];
      D.N[t][k] = CycloValue::q_power(D.ctx, D.F[k]) * s;
    }
  for (std::size_t s = 0; s < nk; ++s)
    for (std::size_t n = 0; n < nn; ++n) {
      CycloValue v(D.ctx);
      for (std::size_t k = 0; k < nk; ++k) v += Character{D.B, k}.at(D.ctx, s) * C[k][n];
      D.M[s][n] = CycloValue::q_power(D.ctx, D.Fhat[n]) * v;
    }
  return D;
}

/// One altered table entry: N[twist][type] (G side) or M[twist][type] (dual side) gains delta.
struct Perturbation {
  bool dual_side = false;
  std::size_t twist = 0;
  std::size_t type = 0;
  CycloValue delta;
};

inline MainIdentityData apply_perturbation(MainIdentityData D, const Perturbation& p) {
  auto& T = p.dual_side ? D.M : D.N;
  T.at(p.twist).at(p.type) += p.delta;
  return D;
}

/**
 * @brief Pairs whose two sides differ after the perturbation, from its propagation alone.
 *
 * A G-side change at (t0, κ0) shifts LHS(s, t0) by κ0(s) q^{−F(κ0)} δ for every s, and touches
 * nothing else; dually for M. Valid when the unperturbed data satisfy the identity.
 */
inline std::set<TwistPair> predicted_failures(const MainIdentityData& D, const Perturbation& p) {
  std::set<TwistPair> out;
  if (!p.dual_side) {
    for (std::size_t s = 0; s < D.B.order(); ++s) {
      CycloValue shift = Character{D.B, p.type}.at(D.ctx, s) * CycloValue::q_power(D.ctx, -D.F[p.type]) * p.delta;
      if (!shift.is_zero()) out.insert({s, p.twist});
    }
  } else {
    for (std::size_t t = 0; t < D.A.order(); ++t) {
      CycloValue shift = Character{D.A, p.type}.at(D.ctx, t) * CycloValue::q_power(D.ctx, -D.Fhat[p.type]) * p.delta;
      if (!shift.is_zero()) out.insert({p.twist, t});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Induced counts

/**
 * @brief #^κ Y = #^{κ|Γ■} Y■ for Y■ ⊂ Y with cohomology induced from Γ■ ⊂ Γ.
 *
 * `sub` lists the elements of Γ■ (indices into Γ); `sub_counts` is keyed by the restricted
 * character, written as its Q/Z values on `sub` in order. Induction multiplies dimension by the
 * index, so full_dim must equal [Γ:Γ■]·sub_dim.
 */
inline std::vector<CycloValue> induced_count_transfer(const FiniteAbelianGroup& G, const std::vector<std::size_t>& sub,
                                                      const std::map<std::vector<Rational>, CycloValue>& sub_counts, const CycloRef& ctx,
                                                      std::uint64_t sub_dim, std::uint64_t full_dim) {
  if (sub.empty() || G.order() % sub.size() != 0) throw Error("induced_count_transfer: subgroup order does not divide the group order");
  std::set<std::size_t> S(sub.begin(), sub.end());
  if (!S.count(0) || S.size() != sub.size()) throw Error("induced_count_transfer: invalid subgroup");
  for (auto a : sub)
    for (auto b : sub)
      if (!S.count(G.add(a, b))) throw Error("induced_count_transfer: subset is not a subgroup");
  const std::uint64_t index = G.order() / sub.size();
  if (full_dim != index * sub_dim) throw Error("induced_count_transfer: inconsistent dimension ratio");
  std::vector<CycloValue> out;
  for (const auto& kappa : characters(G)) {
    std::vector<Rational> res;
    for (auto h : sub) res.push_back(kappa.value(h));
    auto it = sub_counts.find(res);
    out.push_back(it == sub_counts.end() ? CycloValue(ctx) : it->second);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json table_to_json(const CountTable& T) {
  nlohmann::json j;
  j["group"] = T.group.d;
  j["values"] = nlohmann::json::object();
  for (std::size_t t = 0; t < T.group.order(); ++t) j["values"][T.group.label(t)] = T.values[t].str();
  return j;
}

/// Missing entries are zero.
inline CountTable table_from_json(const nlohmann::json& j, const CycloRef& ctx) {
  if (!j.contains("group") || !j.contains("values")) throw Error("count table: expected 'group' and 'values'");
  CountTable T{FiniteAbelianGroup(j.at("group").get<std::vector<std::uint64_t>>()), {}};
  T.values.assign(T.group.order(), CycloValue(ctx));
  for (auto& [k, v] : j.at("values").items()) T.values[T.group.parse_label(k)] = parse_cyclo(ctx, v.is_string() ? v.get<std::string>() : v.dump());
  return T;
}

inline nlohmann::json main_identity_to_json(const MainIdentityData& D) {
  nlohmann::json j;
  j["q"] = D.q;
  j["A"] = D.A.d;
  j["B"] = D.B.d;
  for (std::size_t k = 0; k < D.B.order(); ++k) j["F"][D.B.label(k)] = D.F[k].get_str();
  for (std::size_t n = 0; n < D.A.order(); ++n) j["F_hat"][D.A.label(n)] = D.Fhat[n].get_str();
  for (std::size_t t = 0; t < D.A.order(); ++t)
    for (std::size_t k = 0; k < D.B.order(); ++k)
      if (!D.N[t][k].is_zero()) j["N"][D.A.label(t)][D.B.label(k)] = D.N[t][k].str();
  for (std::size_t s = 0; s < D.B.order(); ++s)
    for (std::size_t n = 0; n < D.A.order(); ++n)
      if (!D.M[s][n].is_zero()) j["M"][D.B.label(s)][D.A.label(n)] = D.M[s][n].str();
  return j;
}

/**
 * @brief Reads {"q", "A", "B", "F", "F_hat", "N", "M"}.
 *
 * A and B are invariant-factor lists. F maps characters of B to weights and F_hat characters of A;
 * absent weights are 0. N[t][κ] and M[s][ν] default to 0.
 */
inline MainIdentityData main_identity_from_json(const nlohmann::json& j) {
  for (const char* k : {"q", "A", "B"})
    if (!j.contains(k)) throw Error(std::string("main identity: missing '") + k + "'");
  MainIdentityData D;
  D.q = j.at("q").get<std::uint64_t>();
  D.A = FiniteAbelianGroup(j.at("A").get<std::vector<std::uint64_t>>());
  D.B = FiniteAbelianGroup(j.at("B").get<std::vector<std::uint64_t>>());
  D.F.assign(D.B.order(), Rational(0));
  D.Fhat.assign(D.A.order(), Rational(0));
  auto read_w = [](const nlohmann::json& v) { return parse_rational(v.is_string() ? v.get<std::string>() : v.dump()); };
  if (j.contains("F"))
    for (auto& [k, v] : j.at("F").items()) D.F[D.B.parse_label(k)] = read_w(v);
  if (j.contains("F_hat"))
    for (auto& [k, v] : j.at("F_hat").items()) D.Fhat[D.A.parse_label(k)] = read_w(v);
  D.ctx = context_for(D.q, D.A, D.B, D.F, D.Fhat);
  D.N.assign(D.A.order(), std::vector<CycloValue>(D.B.order(), CycloValue(D.ctx)));
  D.M.assign(D.B.order(), std::vector<CycloValue>(D.A.order(), CycloValue(D.ctx)));
  auto read_v = [&](const nlohmann::json& v) { return parse_cyclo(D.ctx, v.is_string() ? v.get<std::string>() : v.dump()); };
  if (j.contains("N"))
    for (auto& [t, row] : j.at("N").items())
      for (auto& [k, v] : row.items()) D.N[D.A.parse_label(t)][D.B.parse_label(k)] = read_v(v);
  if (j.contains("M"))
    for (auto& [s, row] : j.at("M").items())
      for (auto& [n, v] : row.items()) D.M[D.B.parse_label(s)][D.A.parse_label(n)] = read_v(v);
  return D;
}

}  // namespace padicvol
