// Acceptance run: one PASS/FAIL line per criterion, exact comparisons, wall-clock budgets.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "padicvol/padicvol.hpp"

using namespace padicvol;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
  void fail(const std::string& why) {
    if (ok) note = why;
    ok = false;
  }
};

AffineSchemeDesc scheme(const FieldDescriptor& K, int n, int d, const std::vector<std::string>& eqs) {
  AffineSchemeDesc X;
  X.n = n;
  X.d = d;
  for (const auto& e : eqs) X.equations.push_back(parse_poly(K, n, e));
  return X;
}

// Independent integer helpers for the oracles below.
long powmod(long b, long e, long m) {
  long r = 1;
  for (b %= m; e; e >>= 1, b = b * b % m)
    if (e & 1) r = r * b % m;
  return r;
}

/// |F^×/(F^×)^N| for F = F_q((t)), q prime: N·[F_q^× : (F_q^×)^N].
std::size_t kummer_count(long q, long N) {
  std::vector<bool> hit(static_cast<std::size_t>(q), false);
  long powers = 0;
  for (long x = 1; x < q; ++x) {
    long y = powmod(x, N, q);
    if (!hit[static_cast<std::size_t>(y)]) hit[static_cast<std::size_t>(y)] = true, ++powers;
  }
  return static_cast<std::size_t>(N * ((q - 1) / powers));
}

Outcome criterion1() {
  Outcome o;
  for (std::uint64_t q : {3u, 5u, 7u}) {
    auto K = make_field(q, 1);
    std::vector<AffineSchemeDesc> suite = {scheme(K, 1, 1, {}), scheme(K, 2, 2, {}), scheme(K, 3, 3, {}),
                                           scheme(K, 2, 1, {"x*y - 1"}), scheme(K, 2, 1, {"y^2 - x^3 - x"}), scheme(K, 2, 1, {"y^2 - x^3 + x"})};
    for (const auto& X : suite) {
      const auto count = count_smooth_points(X, K);
      const VolumeValue want = VolumeValue::with_base(q, Rational(static_cast<long>(count))) * VolumeValue::q_power(q, -X.d);
      if (weil_volume(X, K) != want) o.fail("weil_volume q=" + std::to_string(q));
      for (int m = 1; m <= 3; ++m) {
        Integer lift = lift_count(X, K, m);
        Integer expect = Integer(static_cast<unsigned long>(count)) * Integer(static_cast<unsigned long>(ipow(q, static_cast<unsigned>((m - 1) * X.d))));
        if (lift != expect) o.fail("lift_count q=" + std::to_string(q) + " m=" + std::to_string(m));
      }
    }
  }
  return o;
}

QuotientStackDesc rotation(std::uint64_t q) { return matrix_stack(q, {{{"0", "-1"}, {"1", "-1"}}}, 0, "rotation"); }

Outcome criterion2() {
  Outcome o;
  struct Entry {
    std::string name;
    std::function<QuotientStackDesc(std::uint64_t)> make;
    std::uint64_t N;  // μ_N stacks need N | q − 1; 0 for the constant rotation group
  };
  std::vector<Entry> suite = {
      {"A1/mu2", [](std::uint64_t q) { return mu_diagonal_stack(q, 2, {1}); }, 2},
      {"A2/mu2(-1,-1)", [](std::uint64_t q) { return mu_diagonal_stack(q, 2, {1, 1}); }, 2},
      {"A2/mu2(1,-1)", [](std::uint64_t q) { return mu_diagonal_stack(q, 2, {0, 1}); }, 2},
      {"A1/mu3", [](std::uint64_t q) { return mu_diagonal_stack(q, 3, {1}); }, 3},
      {"A2/mu3(xi,xi2)", [](std::uint64_t q) { return mu_diagonal_stack(q, 3, {1, 2}); }, 3},
      {"rotation", rotation, 0},
  };
  for (const auto& e : suite)
    for (std::uint64_t q : {5u, 7u, 13u}) {
      if (e.N != 0 && (q - 1) % e.N != 0) continue;
      auto st = e.make(q);
      auto res = fiber_volume_oracle(st, 8);
      for (const auto& c : twisted_inertia(st)) {
        auto iv = res.of(c);
        const std::string tag = e.name + " q=" + std::to_string(q);
        if (!iv.contains(fiber_volume(c, q))) o.fail(tag + ": interval misses the fiber");
        if (!iv.bounded || !(iv.width() <= VolumeValue::q_power(q, -6))) o.fail(tag + ": interval too wide");
      }
    }
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (std::uint64_t q : {5u, 13u}) {
    auto st = mu_diagonal_stack(q, 2, {1});
    const VolumeValue one = VolumeValue::with_base(q, 1);
    const VolumeValue closed = one + VolumeValue::q_power(q, Rational(-1, 2));
    if (stringy_volume(st).stringy != closed) o.fail("stringy q=" + std::to_string(q));
    auto K = make_field(q, 1);
    auto iv = integrate_adaptive({parse_poly(K, 1, "4*x"), Rational(-1, 2)}, 16);  // width q^{-(L+1)/2}
    if (!iv.bounded || !iv.contains(closed)) o.fail("coarse integral misses q=" + std::to_string(q));
    else if (!(iv.width() <= VolumeValue::q_power(q, -8))) o.fail("coarse interval too wide q=" + std::to_string(q));
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  // non-diagonal μ_3-action over F_5 with eigenvalues in F_25: S^{-1} diag(ξ, ξ²) S
  auto K = make_field(5, 2);
  Code xi = primitive_root(*K, 3);
  Matrix S(2, 2);
  S(0, 0) = 1, S(0, 1) = 1, S(1, 1) = 1;
  Matrix A = mat_mul(*K, mat_mul(*K, inverse(*K, S), Matrix::diagonal({xi, K->mul(xi, xi)})), S);
  auto L = lambda_map({K, 1, 3, A, xi});
  if (!L.certificate.passed()) o.fail("certificate rejected");
  for (const auto& row : L.substitution)
    for (const auto& s : row)
      if (s.frobenius(1) != s) o.fail("substitution is not Frobenius-fixed");
  return o;
}

Outcome criterion5() {
  Outcome o;
  for (long q : {5L, 7L, 11L}) {
    auto n = enumerate_h1(GroupWithFrobenius::cyclic(2), static_cast<std::uint64_t>(q)).size();
    if (n != 4 || n != kummer_count(q, 2)) o.fail("Z/2 at q=" + std::to_string(q));
  }
  for (long q : {7L, 13L}) {
    auto n = enumerate_h1(GroupWithFrobenius::cyclic(3), static_cast<std::uint64_t>(q)).size();
    if (n != 9 || n != kummer_count(q, 3)) o.fail("Z/3 at q=" + std::to_string(q));
  }
  std::vector<std::pair<GroupWithFrobenius, std::uint64_t>> groups = {
      {GroupWithFrobenius::cyclic(2), 5},  {GroupWithFrobenius::cyclic(3), 7},         {GroupWithFrobenius::cyclic(6), 7},
      {GroupWithFrobenius::symmetric(3), 7}, {GroupWithFrobenius::cyclic_twisted(3, 5), 5},
      {GroupWithFrobenius::product(GroupWithFrobenius::cyclic(2), GroupWithFrobenius::cyclic(2)), 5}};
  for (const auto& [G, q] : groups)
    for (const auto& c : enumerate_h1(G, q)) {
      std::size_t deg = 0;
      for (const auto& f : orbit_decomposition(G, c.rep)) deg += f.f * f.e * f.mult;
      if (deg != G.order()) o.fail("orbit degrees do not sum to |Γ|");
    }
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (long q : {5L, 13L}) {
    auto st = mu_diagonal_stack(static_cast<std::uint64_t>(q), 2, {1});
    // oracle: (ε, u)_2 = Legendre(ε)^{v(u)} with ε the least primitive root mod q
    long eps = 2;
    while (powmod(eps, (q - 1) / 2, q) == 1) ++eps;
    for (std::uint64_t chi = 0; chi < 2; ++chi)
      for (long v = 0; v <= 4; ++v)
        for (long u0 = 1; u0 < q; ++u0)
          for (long u1 = 0; u1 < q; ++u1) {
            auto U = TruncatedSeries::exact(st.K, 1, v, {st.K->from_int(u0), st.K->from_int(u1)});
            auto h = hasse_specialization_check(st, chi, U);
            const bool nontrivial = powmod(powmod(eps, (q - 1) / 2, q), v, q) != 1;
            QmodZValue oracle(Rational(static_cast<long>(chi) * (nontrivial ? 1 : 0), 2));
            if (!h.equal || h.lhs != oracle || h.rhs != oracle) o.fail("q=" + std::to_string(q) + " v=" + std::to_string(v));
          }
  }
  for (std::uint64_t N = 1; N <= 12; ++N)
    for (std::uint64_t chi = 0; chi < N; ++chi)
      if (invariant(torsor_gerbe({N, chi})) != QmodZValue(Rational(static_cast<long>(chi), static_cast<long>(N)))) o.fail("gerbe invariant");
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(20261019);
  const std::vector<std::vector<std::uint64_t>> shapes = {{2}, {3}, {4}, {2, 2}, {6}, {2, 4}};
  const std::vector<std::uint64_t> qs = {5, 7, 13};
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto weights = [&](std::size_t n) {
    std::vector<Rational> w(n);
    for (auto& x : w) x = Rational(static_cast<long>(pick(5)), static_cast<long>(1 + pick(2)));
    return w;
  };
  std::size_t perturbed = 0;
  for (int i = 0; i < 100; ++i) {
    FiniteAbelianGroup A(shapes[pick(shapes.size())]), B(shapes[pick(shapes.size())]);
    auto D = mirror_generator(qs[pick(qs.size())], A, B, weights(B.order()), weights(A.order()), rng());
    if (!verify_main_identity(D).ok()) o.fail("main identity on instance " + std::to_string(i));
    auto sr = derive_stable_equality(D);
    if (!sr.equal || !sr.orthogonality_ok) o.fail("stable equality on instance " + std::to_string(i));
    for (std::size_t l = 0; l < A.order(); ++l) {
      auto kr = derive_kappa_identity(D, l);
      if (!kr.equal || !kr.orthogonality_ok) o.fail("kappa identity on instance " + std::to_string(i));
    }
    Perturbation P;
    P.dual_side = pick(2) == 1;
    P.twist = pick(P.dual_side ? B.order() : A.order());
    P.type = pick(P.dual_side ? A.order() : B.order());
    P.delta = CycloValue::zeta_power(D.ctx, static_cast<long>(pick(D.ctx->M))).scale(Rational(static_cast<long>(1 + pick(4))));
    auto got = verify_main_identity(apply_perturbation(D, P)).failing;
    auto want = predicted_failures(D, P);
    if (want.empty() || got != want) o.fail("perturbation on instance " + std::to_string(i));
    ++perturbed;
  }
  if (perturbed != 100) o.fail("perturbation count");
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::size_t pairs = 0;
  for (std::uint64_t p : {5u, 7u, 11u, 13u}) {
    auto K = make_field(p, 1);
    for (const auto& E : full_two_torsion_curves(K))
      for (const auto& T : two_torsion_points(E)) {
        auto r = verify_volume_equality(E, two_isogenous(E, T).target);
        if (!r.equal) o.fail("counts differ over F_" + std::to_string(p) + " for " + E.str());
        if (!r.hasse_ok) o.fail("Hasse bound over F_" + std::to_string(p));
        ++pairs;
      }
  }
  if (pairs != 3 * (10 + 35 + 165 + 286)) o.fail("unexpected suite size");
  return o;
}

Outcome criterion9() {
  Outcome o;
  RunConfig one, eight;
  eight.jobs = 8;
  for (const char* fmt : {"json", "csv", "text"})
    if (render(run_verify_all(one), fmt) != render(run_verify_all(eight), fmt)) o.fail(std::string("reports differ in ") + fmt);
  if (!run_verify_all(one).pass()) o.fail("verify-all has failing checks");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* what;
    double budget_s;
    Outcome (*run)();
  };
  const std::vector<Criterion> all = {
      {1, "Weil volume and lift counts", 10, criterion1},
      {2, "fiber-volume oracle contains every fiber", 60, criterion2},
      {3, "stringy total of [A^1/mu_2] and the coarse integral", 60, criterion3},
      {4, "lambda-map Frobenius certificate", 60, criterion4},
      {5, "torsor counts and orbit degrees", 5, criterion5},
      {6, "Hasse specialization and gerbe invariants", 60, criterion6},
      {7, "Fourier main identity, stabilisation and perturbations", 10, criterion7},
      {8, "point counts across 2-isogenies", 30, criterion8},
      {9, "verify-all determinism across --jobs", 60, criterion9},
  };
  int failures = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && s > c.budget_s) o.fail("over the time budget");
    std::printf("%s criterion %d: %s (%.2fs / %.0fs)%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.what, s, c.budget_s, o.ok ? "" : " - ",
                o.note.c_str());
    failures += !o.ok;
  }
  return failures == 0 ? 0 : 1;
}
