#pragma once

#include <json.hpp>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fourier.hpp"
#include "hasse.hpp"
#include "neron.hpp"
#include "orbifold.hpp"
#include "torsor.hpp"

namespace padicvol {

using ojson = nlohmann::ordered_json;

/// Options shared by every subcommand.
struct RunConfig {
  int level = 4;
  unsigned jobs = 1;
  std::uint64_t max_cells = 100000000;
};

/**
 * @brief Module-specific results plus named oracle checks.
 *
 * No timing is recorded, so equal configs give byte-identical output.
 */
struct Report {
  std::string command;
  ojson inputs = ojson::object();
  ojson results = ojson::object();
  std::vector<std::pair<std::string, bool>> checks;

  void check(std::string name, bool ok) { checks.emplace_back(std::move(name), ok); }
  bool pass() const {
    for (const auto& [n, ok] : checks)
      if (!ok) return false;
    return true;
  }
  ojson to_json() const {
    ojson c = ojson::array();
    for (const auto& [n, ok] : checks) c.push_back({{"name", n}, {"pass", ok}});
    return {{"command", command}, {"inputs", inputs}, {"results", results}, {"checks", c}, {"pass", pass()}};
  }
};

namespace detail {

inline std::string scalar_text(const ojson& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

inline void flatten(const ojson& v, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], path + "[" + std::to_string(i) + "]", out);
    if (v.empty()) out.emplace_back(path, "[]");
  } else {
    out.emplace_back(path, scalar_text(v));
  }
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char c : s) r += c == '"' ? std::string("\"\"") : std::string(1, c);
  return r + "\"";
}

}  // namespace detail

/// "json", "csv" (path,value rows) or "text" (path: value lines).
inline std::string render(const Report& r, const std::string& format) {
  const ojson j = r.to_json();
  if (format == "json") return j.dump(2) + "\n";
  std::vector<std::pair<std::string, std::string>> rows;
  detail::flatten(j, "", rows);
  std::ostringstream os;
  if (format == "csv") {
    os << "path,value\n";
    for (const auto& [p, v] : rows) os << detail::csv_field(p) << "," << detail::csv_field(v) << "\n";
  } else if (format == "text") {
    for (const auto& [p, v] : rows) os << p << ": " << v << "\n";
  } else {
    throw Error("unknown format '" + format + "'");
  }
  return os.str();
}

namespace detail {

inline const ojson& need(const ojson& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw Error(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline nlohmann::json plain(const ojson& j) { return nlohmann::json::parse(j.dump()); }

inline ojson class_json(const QuotientStackDesc& st, const InertiaClass& c, bool with_volume) {
  ojson o = {{"y", st.render_y(c.y)}, {"g", st.group.G.label(c.g)}, {"alpha", st.group.G.label(c.alpha)},
             {"weight", to_string(c.weight)}, {"aut", c.aut_order}};
  if (with_volume) o["volume"] = fiber_volume(c, st.q).str();
  return o;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// volume / inertia

/**
 * @brief Weil volume of {"scheme": {p, r, n, d, equations}} or stringy volume of a stack spec.
 *
 * Schemes are cross-checked by lift_count(m) = count·q^{(m−1)d} for m ≤ min(level, 3); stacks by
 * the fiber-volume oracle at the configured level.
 */
inline Report run_volume(const ojson& spec, const RunConfig& cfg) {
  Report R;
  R.command = "volume";
  R.inputs = {{"spec", spec}, {"level", cfg.level}};
  if (spec.contains("scheme")) {
    const auto& s = spec.at("scheme");
    const std::string where = "scheme spec";
    auto K = make_field(detail::need(s, "p", where).get<std::uint64_t>(), s.value("r", 1u));
    AffineSchemeDesc X;
    X.n = detail::need(s, "n", where).get<int>();
    X.d = detail::need(s, "d", where).get<int>();
    X.name = s.value("name", std::string("scheme"));
    for (const auto& e : detail::need(s, "equations", where)) X.equations.push_back(parse_poly(K, X.n, e.get<std::string>()));
    const std::uint64_t count = count_smooth_points(X, K, cfg.max_cells);
    const VolumeValue vol = weil_volume(X, K, cfg.max_cells);
    R.results["count"] = count;
    R.results["weil_volume"] = vol.str();
    R.check("weil_volume_is_count_over_q^d",
            vol == VolumeValue::with_base(K->q, Rational(static_cast<long>(count))) * VolumeValue::q_power(K->q, -X.d));
    ojson lifts = ojson::array();
    for (int m = 1; m <= std::min(cfg.level, 3); ++m) {
      Integer got = lift_count(X, K, m, cfg.max_cells);
      Integer want = Integer(static_cast<unsigned long>(count)) * Integer(static_cast<unsigned long>(ipow(K->q, static_cast<unsigned>((m - 1) * X.d))));
      lifts.push_back({{"m", m}, {"count", got.get_str()}, {"expected", want.get_str()}});
      R.check("lift_count_m" + std::to_string(m), got == want);
    }
    R.results["lift_counts"] = lifts;
    return R;
  }
  auto st = build_stack(detail::plain(spec));
  auto S = stringy_volume(st, cfg.max_cells, cfg.jobs);
  ojson classes = ojson::array();
  for (const auto& c : S.classes) classes.push_back(detail::class_json(st, c, true));
  R.results["classes"] = classes;
  R.results["stringy_volume"] = S.stringy.str();
  R.results["naive_count_over_qd"] = S.naive.str();
  R.results["agree"] = S.agree;
  auto O = fiber_volume_oracle(st, cfg.level, cfg.max_cells);
  ojson oracle = ojson::array();
  bool contained = true;
  for (const auto& c : S.classes) {
    auto iv = O.of(c);
    bool in = iv.contains(fiber_volume(c, st.q));
    contained = contained && in;
    oracle.push_back({{"interval", iv.str()}, {"contains", in}});
  }
  R.results["oracle"] = {{"route", O.route}, {"total", O.total.str()}, {"fibers", oracle}};
  R.check("oracle_contains_every_fiber", contained);
  R.check("oracle_total_equals_stringy", O.total == S.stringy);
  return R;
}

inline Report run_inertia(const ojson& spec, const RunConfig& cfg) {
  Report R;
  R.command = "inertia";
  R.inputs = {{"spec", spec}};
  auto st = build_stack(detail::plain(spec));
  auto cls = twisted_inertia(st, cfg.max_cells, cfg.jobs);
  ojson arr = ojson::array();
  bool canonical = true, divides = true;
  for (const auto& c : cls) {
    arr.push_back(detail::class_json(st, c, false));
    canonical = canonical && st.canonical(c.key()).first == c.key();
    divides = divides && st.order() % c.aut_order == 0;
  }
  R.results["working_field_degree"] = st.S;
  R.results["group_order"] = st.order();
  R.results["classes"] = arr;
  R.check("representatives_are_canonical", canonical);
  R.check("aut_orders_divide_group_order", divides);
  return R;
}

// ---------------------------------------------------------------------------
// torsors

/// {"kind": "cyclic"|"cyclic_twisted"|"symmetric"|"product", ...}; appends N_i to `constant_cyclic` when Γ = Π Z/N_i is constant.
inline GroupWithFrobenius group_from_json(const ojson& g, std::uint64_t q, std::vector<std::uint64_t>* constant_cyclic) {
  const std::string where = "group spec";
  const std::string kind = detail::need(g, "kind", where).get<std::string>();
  if (kind == "cyclic") {
    auto N = detail::need(g, "N", where).get<std::uint64_t>();
    if (N == 0) throw Error("group spec: N must be positive");
    if (constant_cyclic) constant_cyclic->push_back(N);
    return GroupWithFrobenius::cyclic(N);
  }
  if (kind == "cyclic_twisted") {
    auto N = detail::need(g, "N", where).get<std::uint64_t>();
    if (N == 0) throw Error("group spec: N must be positive");
    return GroupWithFrobenius::cyclic_twisted(N, g.value("m", q) % N);
  }
  if (kind == "symmetric") return GroupWithFrobenius::symmetric(detail::need(g, "k", where).get<std::size_t>());
  if (kind == "product") {
    const auto& fs = detail::need(g, "factors", where);
    if (!fs.is_array() || fs.empty()) throw Error("group spec: product needs a non-empty 'factors' list");
    std::vector<std::uint64_t> orders;
    bool all_cyclic = true;
    GroupWithFrobenius G = GroupWithFrobenius::cyclic(1);
    for (const auto& f : fs) {
      std::vector<std::uint64_t> sub;
      auto H = group_from_json(f, q, &sub);
      if (sub.empty()) all_cyclic = false;
      orders.insert(orders.end(), sub.begin(), sub.end());
      G = GroupWithFrobenius::product(G, H);
    }
    if (constant_cyclic && all_cyclic) constant_cyclic->insert(constant_cyclic->end(), orders.begin(), orders.end());
    return G;
  }
  throw Error("group spec: unknown kind '" + kind + "'");
}

/// {"q": q, "group": {...}}.
inline Report run_torsors(const ojson& spec, const RunConfig&) {
  Report R;
  R.command = "torsors";
  R.inputs = {{"spec", spec}};
  const auto q = detail::need(spec, "q", "torsor spec").get<std::uint64_t>();
  std::vector<std::uint64_t> cyc;
  auto G = group_from_json(detail::need(spec, "group", "torsor spec"), q, &cyc);
  G.validate();
  auto cls = enumerate_h1(G, q);
  ojson arr = ojson::array();
  bool degrees_ok = true;
  for (const auto& c : cls) {
    ojson alg = ojson::array();
    std::size_t deg = 0;
    for (const auto& f : orbit_decomposition(G, c.rep)) {
      alg.push_back({{"f", f.f}, {"e", f.e}, {"mult", f.mult}});
      deg += f.f * f.e * f.mult;
    }
    degrees_ok = degrees_ok && deg == G.order();
    ojson o = {{"x_beta", G.label(c.rep.x_beta)}, {"x_gamma", G.label(c.rep.x_gamma)}, {"orbit_size", c.size}, {"kind", c.kind.tag()}, {"algebra", alg}};
    if (c.kind.strongly_ramified) o["inertia_order"] = inertia_subgroup(G, c.rep).N;
    arr.push_back(o);
  }
  R.results["group_order"] = G.order();
  R.results["class_count"] = cls.size();
  R.results["classes"] = arr;
  R.check("algebra_degree_equals_group_order", degrees_ok);
  if (!cyc.empty()) {
    // constant abelian Γ = Π Z/N_i: |H^1| = Π N_i·gcd(N_i, q−1)
    std::uint64_t want = 1;
    for (auto N : cyc) want *= N * std::gcd(N, q - 1);
    R.results["kummer_count"] = want;
    R.check("class_count_matches_kummer", cls.size() == want);
  }
  return R;
}

// ---------------------------------------------------------------------------
// hasse

/// {"q", "N", "w" (default 1), "max_val" (default 4), "chi" (default all), "gerbe_max" (default 12)}.
inline Report run_hasse(const ojson& spec, const RunConfig&) {
  Report R;
  R.command = "hasse";
  R.inputs = {{"spec", spec}};
  const std::string where = "hasse spec";
  const auto q = detail::need(spec, "q", where).get<std::uint64_t>();
  const auto N = detail::need(spec, "N", where).get<std::uint64_t>();
  const long w = spec.value("w", 1L);
  const long max_val = spec.value("max_val", 4L);
  if (N == 0 || max_val < 0) throw Error("hasse spec: N must be positive and max_val nonnegative");
  std::vector<std::uint64_t> chis;
  if (spec.contains("chi"))
    chis.push_back(spec.at("chi").get<std::uint64_t>() % N);
  else
    for (std::uint64_t c = 0; c < N; ++c) chis.push_back(c);
  auto st = mu_diagonal_stack(q, N, {w});
  const long winv = detail::inv_mod_long(((w % static_cast<long>(N)) + static_cast<long>(N)) % static_cast<long>(N), static_cast<long>(N));
  std::size_t points = 0, agree = 0, cyclic_ok = 0;
  ojson rows = ojson::array();
  for (auto chi : chis)
    for (long v = 0; v <= max_val; ++v)
      for (std::uint64_t u0 = 1; u0 < q; ++u0) {
        auto U = TruncatedSeries::exact(st.K, 1, v, {st.K->from_int(static_cast<long>(u0))});
        auto h = hasse_specialization_check(st, chi, U);
        QmodZValue cyc(Rational(static_cast<long>(chi) * winv * v, static_cast<long>(N)));
        ++points;
        agree += h.equal;
        cyclic_ok += h.lhs == cyc;
        rows.push_back({{"chi", chi}, {"v", v}, {"u0", u0}, {"lhs", h.lhs.str()}, {"rhs", h.rhs.str()}, {"alpha", st.group.G.label(h.cls.alpha)}});
      }
  R.results["points"] = points;
  R.results["rows"] = rows;
  R.check("symbol_equals_character_of_inertia", agree == points);
  R.check("symbol_equals_cyclic_algebra_invariant", cyclic_ok == points);
  const auto gmax = spec.value("gerbe_max", std::uint64_t{12});
  bool gerbes = true;
  for (std::uint64_t M = 1; M <= gmax; ++M)
    for (std::uint64_t c = 0; c < M; ++c) gerbes = gerbes && invariant(torsor_gerbe({M, c})) == QmodZValue(Rational(static_cast<long>(c), static_cast<long>(M)));
  R.results["gerbe_max"] = gmax;
  R.check("torsor_gerbe_invariant_is_chi_over_N", gerbes);
  return R;
}

// ---------------------------------------------------------------------------
// fourier

namespace detail {

inline std::vector<Rational> weights_json(const ojson& j, const FiniteAbelianGroup& G) {
  std::vector<Rational> w(G.order(), Rational(0));
  if (j.is_null()) return w;
  for (auto it = j.begin(); it != j.end(); ++it) w[G.parse_label(it.key())] = parse_rational(scalar_text(it.value()));
  return w;
}

inline ojson pair_list(const MainIdentityData& D, const std::set<TwistPair>& ps) {
  ojson a = ojson::array();
  for (const auto& [s, t] : ps) a.push_back({D.B.label(s), D.A.label(t)});
  return a;
}

}  // namespace detail

/**
 * @brief Main-identity data ({"generate": {...}} or the JSON document form), or {"table": {...}}.
 *
 * "perturbations": [{"dual_side", "twist", "type", "delta"}] are applied one at a time and each
 * must fail exactly at its predicted pairs.
 */
inline Report run_fourier(const ojson& spec, const RunConfig&) {
  Report R;
  R.command = "fourier";
  R.inputs = {{"spec", spec}};
  if (spec.contains("table")) {
    const auto& t = spec.at("table");
    auto G = FiniteAbelianGroup(detail::need(t, "group", "table").get<std::vector<std::uint64_t>>());
    if (!t.contains("values") || t.at("values").empty()) throw Error("fourier: empty table");
    auto ctx = make_cyclo_context(G.exponent(), 1, spec.value("q", std::uint64_t{2}));
    auto T = table_from_json(detail::plain(t), ctx);
    auto hat = fourier_transform(T);
    ojson h = ojson::object();
    for (std::size_t k = 0; k < hat.size(); ++k) h[G.label(k)] = hat[k].str();
    R.results["transform"] = h;
    R.results["stable_count"] = stable_count(T).str();
    auto back = fourier_inverse(G, hat);
    bool same = true;
    for (std::size_t i = 0; i < T.values.size(); ++i) same = same && back.values[i] == T.values[i];
    R.check("inverse_recovers_table", same);
    return R;
  }
  MainIdentityData D;
  if (spec.contains("generate")) {
    const auto& g = spec.at("generate");
    const std::string where = "generate";
    auto A = FiniteAbelianGroup(detail::need(g, "A", where).get<std::vector<std::uint64_t>>());
    auto B = FiniteAbelianGroup(detail::need(g, "B", where).get<std::vector<std::uint64_t>>());
    D = mirror_generator(detail::need(g, "q", where).get<std::uint64_t>(), A, B, detail::weights_json(g.value("F", ojson()), B),
                         detail::weights_json(g.value("F_hat", ojson()), A), g.value("seed", std::uint64_t{1}), g.value("density", 0.5));
  } else {
    if (!spec.contains("N") || !spec.contains("M") || spec.at("N").empty() || spec.at("M").empty()) throw Error("fourier: empty table");
    D = main_identity_from_json(detail::plain(spec));
  }
  D.validate();
  auto mi = verify_main_identity(D);
  R.results["pairs_checked"] = mi.pairs_checked;
  R.results["failing"] = detail::pair_list(D, mi.failing);
  R.check("main_identity", mi.ok());
  auto sr = derive_stable_equality(D);
  R.results["stable"] = {{"lhs", sr.lhs.str()}, {"rhs", sr.rhs.str()}, {"orthogonality", sr.orthogonality_ok}};
  R.check("stable_equality", sr.equal && sr.orthogonality_ok);
  ojson kap = ojson::array();
  bool kap_ok = true;
  for (std::size_t l = 0; l < D.A.order(); ++l) {
    auto kr = derive_kappa_identity(D, l);
    kap_ok = kap_ok && kr.equal && kr.orthogonality_ok;
    kap.push_back({{"lambda", D.A.label(l)}, {"lhs", kr.lhs.str()}, {"rhs", kr.rhs.str()}, {"block_present", kr.block_present}, {"equal", kr.equal}});
  }
  R.results["kappa"] = kap;
  R.check("kappa_identity_all_lambda", kap_ok);
  if (spec.contains("perturbations")) {
    ojson arr = ojson::array();
    std::size_t i = 0;
    for (const auto& p : spec.at("perturbations")) {
      Perturbation P;
      P.dual_side = p.value("dual_side", false);
      const auto& tw = P.dual_side ? D.B : D.A;
      const auto& ty = P.dual_side ? D.A : D.B;
      P.twist = tw.parse_label(detail::need(p, "twist", "perturbation").get<std::string>());
      P.type = ty.parse_label(detail::need(p, "type", "perturbation").get<std::string>());
      P.delta = parse_cyclo(D.ctx, detail::scalar_text(detail::need(p, "delta", "perturbation")));
      auto got = verify_main_identity(apply_perturbation(D, P)).failing;
      auto want = predicted_failures(D, P);
      arr.push_back({{"failing", detail::pair_list(D, got)}, {"predicted", detail::pair_list(D, want)}});
      R.check("perturbation_" + std::to_string(i++) + "_flags_predicted_pairs", got == want);
    }
    R.results["perturbations"] = arr;
  }
  return R;
}

// ---------------------------------------------------------------------------
// isogeny

namespace detail {

inline ojson isogeny_row(const IsogenyData& D, unsigned jobs) {
  auto v = verify_volume_equality(D.source, D.target, jobs);
  const Field& F = *D.source.K;
  return {{"kernel", "(" + F.str(D.kernel.x) + "," + F.str(D.kernel.y) + ")"},
          {"target", D.target.str()},
          {"count_source", v.count_source},
          {"count_target", v.count_target},
          {"volume_source", v.volume_source.str()},
          {"volume_target", v.volume_target.str()},
          {"equal", v.equal},
          {"hasse_bound", v.hasse_ok}};
}

}  // namespace detail

/// {"p", "r", "curve": [a1,a2,a3,a4,a6], "kernel": [x, y]} or {"suite": [q, ...]} over prime fields.
inline Report run_isogeny(const ojson& spec, const RunConfig& cfg) {
  Report R;
  R.command = "isogeny";
  R.inputs = {{"spec", spec}};
  if (spec.contains("suite")) {
    ojson arr = ojson::array();
    bool equal = true, hasse = true;
    for (const auto& qj : spec.at("suite")) {
      auto K = make_field(qj.get<std::uint64_t>(), 1);
      std::size_t curves = 0, isos = 0;
      bool eq = true, hb = true;
      for (const auto& E : full_two_torsion_curves(K)) {
        ++curves;
        const auto nE = count_points(E, cfg.jobs, cfg.max_cells);
        for (const auto& T : two_torsion_points(E)) {
          auto D = two_isogenous(E, T);
          const auto nT = count_points(D.target, cfg.jobs, cfg.max_cells);
          ++isos;
          eq = eq && nE == nT;
          hb = hb && satisfies_hasse_bound(nE, K->q) && satisfies_hasse_bound(nT, K->q);
        }
      }
      arr.push_back({{"q", K->q}, {"curves", curves}, {"isogenies", isos}, {"all_equal", eq}, {"hasse_bound", hb}});
      equal = equal && eq;
      hasse = hasse && hb;
    }
    R.results["suite"] = arr;
    R.check("isogenous_counts_equal", equal);
    R.check("hasse_bound", hasse);
    return R;
  }
  const std::string where = "isogeny spec";
  auto K = make_field(detail::need(spec, "p", where).get<std::uint64_t>(), spec.value("r", 1u));
  auto a = detail::need(spec, "curve", where).get<std::vector<long>>();
  if (a.size() != 5) throw Error("isogeny spec: 'curve' must list a1, a2, a3, a4, a6");
  const Field& F = *K;
  auto E = WeierstrassCurve::make(K, F.from_int(a[0]), F.from_int(a[1]), F.from_int(a[2]), F.from_int(a[3]), F.from_int(a[4]));
  std::vector<AffinePoint> kernels;
  if (spec.contains("kernel")) {
    auto k = spec.at("kernel").get<std::vector<long>>();
    if (k.size() != 2) throw Error("isogeny spec: 'kernel' must be [x, y]");
    kernels.push_back({F.from_int(k[0]), F.from_int(k[1])});
  } else {
    kernels = two_torsion_points(E);
  }
  R.results["curve"] = E.str();
  R.results["count"] = count_points(E, cfg.jobs, cfg.max_cells);
  ojson arr = ojson::array();
  bool ok = true;
  for (const auto& T : kernels) {
    auto row = detail::isogeny_row(two_isogenous(E, T), cfg.jobs);
    ok = ok && row["equal"].get<bool>() && row["hasse_bound"].get<bool>();
    arr.push_back(row);
  }
  R.results["isogenies"] = arr;
  R.check("isogenous_counts_equal", ok);
  return R;
}

// ---------------------------------------------------------------------------
// verify-all

/// The built-in demonstration suite: one spec per subcommand family, in fixed order.
inline std::vector<std::pair<std::string, ojson>> builtin_suite() {
  return {
      {"volume", ojson::parse(R"J({"scheme":{"p":7,"n":2,"d":1,"equations":["y^2 - x^3 + x"]}})J")},
      {"volume", ojson::parse(R"J({"name":"A1/mu2","p":5,"n":1,"group":{"kind":"muN","N":2,"weights":[1]}})J")},
      {"volume", ojson::parse(R"J({"name":"A2/mu3","p":7,"n":2,"group":{"kind":"muN","N":3,"weights":[1,2]}})J")},
      {"inertia", ojson::parse(R"J({"name":"rotation","p":7,"n":2,"group":{"kind":"matrix_list","generators":[[[0,-1],[1,-1]]]}})J")},
      {"torsors", ojson::parse(R"J({"q":7,"group":{"kind":"cyclic","N":3}})J")},
      {"torsors", ojson::parse(R"J({"q":7,"group":{"kind":"symmetric","k":3}})J")},
      {"hasse", ojson::parse(R"J({"q":5,"N":2,"max_val":4})J")},
      {"fourier", ojson::parse(R"J({"generate":{"q":5,"A":[2],"B":[2,2],"F":{"(0,0)":"0","(1,0)":"1/2"},"F_hat":{"(1)":"1"},"seed":7},
                                  "perturbations":[{"twist":"(1)","type":"(0,1)","delta":"1"}]})J")},
      {"isogeny", ojson::parse(R"J({"suite":[5,7]})J")},
  };
}

inline Report run_command(const std::string& cmd, const ojson& spec, const RunConfig& cfg);

inline Report run_verify_all(const RunConfig& cfg) {
  Report R;
  R.command = "verify-all";
  R.inputs = {{"level", cfg.level}};
  ojson runs = ojson::array();
  std::size_t i = 0;
  for (const auto& [cmd, spec] : builtin_suite()) {
    Report r = run_command(cmd, spec, cfg);
    for (const auto& [n, ok] : r.checks) R.check(std::to_string(i) + "." + cmd + "." + n, ok);
    runs.push_back(r.to_json());
    ++i;
  }
  R.results["runs"] = runs;
  return R;
}

inline Report run_command(const std::string& cmd, const ojson& spec, const RunConfig& cfg) {
  if (cfg.level < 1) throw Error("level must be at least 1");
  if (cmd == "volume") return run_volume(spec, cfg);
  if (cmd == "inertia") return run_inertia(spec, cfg);
  if (cmd == "torsors") return run_torsors(spec, cfg);
  if (cmd == "hasse") return run_hasse(spec, cfg);
  if (cmd == "fourier") return run_fourier(spec, cfg);
  if (cmd == "isogeny") return run_isogeny(spec, cfg);
  if (cmd == "verify-all") return run_verify_all(cfg);
  throw Error("unknown subcommand '" + cmd + "'");
}

}  // namespace padicvol
