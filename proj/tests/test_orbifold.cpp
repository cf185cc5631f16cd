#include <gtest/gtest.h>

#include <algorithm>

#include "oracles/orbifold_oracle.hpp"
#include "padicvol/orbifold.hpp"

using namespace padicvol;

namespace {

const std::vector<std::vector<std::string>> kRotation = {{"0", "-1"}, {"1", "-1"}};

QuotientStackDesc rotation(std::uint64_t q) { return matrix_stack(q, {kRotation}, 0, "rotation"); }

/// A non-diagonal μ_3-action over F_5: S^{-1} diag(ξ, ξ²) S with S = [[1,1],[0,1]].
MuNAction conjugated_mu3() {
  auto K = make_field(5, 2);
  Code xi = primitive_root(*K, 3);
  Matrix S(2, 2);
  S(0, 0) = 1, S(0, 1) = 1, S(1, 1) = 1;
  Matrix A = mat_mul(*K, mat_mul(*K, inverse(*K, S), Matrix::diagonal({xi, K->mul(xi, xi)})), S);
  return {K, 1, 3, A, xi};
}

std::multiset<std::pair<Rational, std::size_t>> weight_aut_profile(const std::vector<InertiaClass>& cls) {
  std::multiset<std::pair<Rational, std::size_t>> out;
  for (const auto& c : cls) out.insert({c.weight, c.aut_order});
  return out;
}

}  // namespace

TEST(Weight, TupleExamples) {
  EXPECT_EQ(weight_of_tuple({Rational(0)}), Rational(1));
  EXPECT_EQ(weight_of_tuple({Rational(1, 2), Rational(1, 2)}), Rational(1));
  EXPECT_EQ(weight_of_tuple({Rational(1, 3), Rational(2, 3), Rational(0)}), Rational(2));
  EXPECT_EQ(weight_of_tuple({Rational(-1, 3)}), Rational(2, 3));
}

TEST(Weight, ActionExamples) {
  auto F5 = make_field(5, 1);
  EXPECT_EQ(action_weight({F5, 1, 1, Matrix::identity(3), 1}), Rational(3));
  EXPECT_EQ(action_weight({F5, 1, 2, Matrix::diagonal({4}), 4}), Rational(1, 2));
  // rotation of order 3 with eigenvalues ξ, ξ² in F_25
  auto K = make_field(5, 2);
  Matrix R(2, 2);
  R(0, 1) = K->from_int(-1), R(1, 0) = 1, R(1, 1) = K->from_int(-1);
  EXPECT_EQ(action_weight({K, 1, 3, R, primitive_root(*K, 3)}), Rational(1));
  EXPECT_THROW(action_weight({F5, 1, 2, Matrix::diagonal({2}), 4}), Error);
}

TEST(LambdaMap, DiagonalActionHasIdentityConjugator) {
  auto K = make_field(13, 1);
  Code xi = primitive_root(*K, 3);
  auto L = lambda_map({K, 1, 3, Matrix::diagonal({K->mul(xi, xi), xi}), xi});
  EXPECT_EQ(L.c, (std::vector<long>{1, 2}));
  // eigenvectors sorted by exponent: e_2 then e_1, so B is the swap and the map is still diagonal
  EXPECT_TRUE(L.certificate.passed());
  EXPECT_EQ(L.substitution[0][0], TruncatedSeries::monomial(K, 3, 1, 2));
  EXPECT_EQ(L.substitution[1][1], TruncatedSeries::monomial(K, 3, 1, 1));
  EXPECT_TRUE(L.substitution[0][1].is_exact_zero());
  auto L2 = lambda_map({K, 1, 3, Matrix::diagonal({xi, K->mul(xi, xi)}), xi});
  EXPECT_EQ(L2.B, Matrix::identity(2));
}

TEST(LambdaMap, TrivialActionIsScalar) {
  // exponents live in [1, N], so N = 1 gives c = (1, 1): the identity conjugator and x ↦ t·x
  auto K = make_field(7, 1);
  auto L = lambda_map({K, 1, 1, Matrix::identity(2), 1});
  EXPECT_EQ(L.B, Matrix::identity(2));
  EXPECT_EQ(L.substitution[0][0], TruncatedSeries::monomial(K, 1, 1, 1));
  EXPECT_TRUE(L.substitution[1][0].is_exact_zero());
}

TEST(LambdaMap, NonDiagonalAlgebraicActionIsFrobeniusFixed) {
  auto act = conjugated_mu3();
  auto L = lambda_map(act);
  EXPECT_TRUE(L.certificate.passed());
  EXPECT_FALSE(act.A.is_diagonal());
  EXPECT_FALSE(L.substitution[0][1].is_exact_zero());
  const Field& K = *act.K;
  // oracle: B A B^{-1} = diag(ξ^{c_i}) and ^φS = S entry by entry
  Matrix D = mat_mul(K, mat_mul(K, L.B, act.A), L.Binv);
  EXPECT_EQ(D, Matrix::diagonal({act.xi, K.mul(act.xi, act.xi)}));
  for (const auto& row : L.substitution)
    for (const auto& s : row) EXPECT_EQ(s.frobenius(1), s);
}

TEST(LambdaMap, RationalRotationIsNotAnAlgebraicMuNAction) {
  // entries in F_5 give ^φR = R, while R^5 = R^2 ≠ R
  auto K = make_field(5, 2);
  Matrix R(2, 2);
  R(0, 1) = K->from_int(-1), R(1, 0) = 1, R(1, 1) = K->from_int(-1);
  auto cert = lambda_certificate({K, 1, 3, R, primitive_root(*K, 3)}).certificate;
  EXPECT_TRUE(cert.order_ok);
  EXPECT_FALSE(cert.algebraic);
  EXPECT_FALSE(cert.frobenius_fixed);
  EXPECT_THROW(lambda_map({K, 1, 3, R, primitive_root(*K, 3)}), Error);
}

TEST(Inertia, MuTwoOnLineTally) {
  auto st = mu_diagonal_stack(5, 2, {1});
  auto cls = twisted_inertia(st);
  ASSERT_EQ(cls.size(), 8u);
  int origin = 0, free = 0;
  for (const auto& c : cls) {
    if (c.y[0] == 0) {
      ++origin;
      EXPECT_EQ(c.aut_order, 2u);
    } else {
      ++free;
      EXPECT_EQ(c.aut_order, 1u);
      EXPECT_EQ(c.alpha, 0u);
    }
  }
  EXPECT_EQ(origin, 4);
  EXPECT_EQ(free, 4);
  // two untwisted and two twisted free classes
  int untwisted_free = 0;
  for (const auto& c : cls)
    if (c.y[0] != 0 && c.g == 0) ++untwisted_free;
  EXPECT_EQ(untwisted_free, 2);
}

TEST(Inertia, TrivialGroup) {
  for (std::uint64_t q : {5u, 7u}) {
    auto st = matrix_stack(q, {{{"1"}}});
    auto cls = twisted_inertia(st);
    EXPECT_EQ(cls.size(), q);
    for (const auto& c : cls) {
      EXPECT_EQ(c.aut_order, 1u);
      EXPECT_EQ(c.weight, Rational(1));
    }
  }
}

TEST(Inertia, PointModMuThree) {
  for (std::uint64_t q : {7u, 13u}) {
    auto st = mu_diagonal_stack(q, 3, {});
    auto cls = twisted_inertia(st);
    EXPECT_EQ(cls.size(), 9u);
    for (const auto& c : cls) EXPECT_EQ(c.aut_order, 3u);
  }
}

TEST(Inertia, MatchesBruteForceOrbitSearch) {
  std::vector<QuotientStackDesc> suite = {mu_diagonal_stack(5, 2, {1}),       mu_diagonal_stack(13, 2, {1}),
                                          mu_diagonal_stack(5, 2, {1, 1}),    mu_diagonal_stack(5, 2, {0, 1}),
                                          mu_diagonal_stack(7, 3, {1}),       mu_diagonal_stack(5, 3, {1, 2}),
                                          rotation(7)};
  for (const auto& st : suite) {
    auto cls = twisted_inertia(st);
    auto brute = oracle::brute_inertia(st);
    ASSERT_EQ(cls.size(), brute.size()) << st.name << " q=" << st.q;
    std::multiset<std::pair<std::size_t, Elem>> a, b;
    for (const auto& c : cls) a.insert({c.aut_order, c.alpha});
    for (const auto& c : brute) b.insert({c.aut, c.alpha});
    EXPECT_EQ(a, b) << st.name << " q=" << st.q;
    for (const auto& c : cls) EXPECT_TRUE(st.valid_triple(c.key()));
  }
}

TEST(Inertia, GroupoidMassPerTwistMatchesBurnside) {
  std::vector<QuotientStackDesc> suite = {mu_diagonal_stack(5, 2, {1}), mu_diagonal_stack(5, 3, {1, 2}), mu_diagonal_stack(7, 3, {1, 1}),
                                          rotation(5), rotation(13)};
  for (const auto& st : suite) {
    const auto& Gr = st.G();
    auto cls = twisted_inertia(st);
    // twist class of g under g ~ φ(h) g h^{-1}
    auto twist_rep = [&](Elem g) {
      Elem best = g;
      for (Elem h = 0; h < Gr.order(); ++h) best = std::min(best, Gr.mul(Gr.mul(Gr.phi[h], g), Gr.inv[h]));
      return best;
    };
    std::map<Elem, Rational> mass, burnside;
    for (const auto& c : cls)
      if (c.alpha == 0) mass[twist_rep(c.g)] += Rational(1, static_cast<long>(c.aut_order));
    // Burnside: (1/|Γ|) #{(y, g) : φ(y) = g y}; each twisted fixed locus has q^n points
    for (Elem g = 0; g < Gr.order(); ++g)
      burnside[twist_rep(g)] += Rational(static_cast<long>(ipow(st.q, static_cast<unsigned>(st.n))), static_cast<long>(Gr.order()));
    EXPECT_EQ(mass, burnside) << st.name;
    Rational total = 0;
    for (auto& [g, v] : mass) total += v;
    EXPECT_EQ(total, Rational(static_cast<long>(ipow(st.q, static_cast<unsigned>(st.n)))));
  }
}

TEST(Inertia, ConjugationInvariance) {
  auto st = mu_diagonal_stack(13, 3, {1, 2});
  Matrix P(2, 2);
  P(0, 0) = 1, P(0, 1) = 2, P(1, 0) = 3, P(1, 1) = 5;
  auto st2 = conjugate_stack(st, P);
  auto a = twisted_inertia(st), b = twisted_inertia(st2);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(weight_aut_profile(a), weight_aut_profile(b));
  EXPECT_EQ(stringy_volume(st).stringy, stringy_volume(st2).stringy);
  auto r = rotation(7);
  Matrix Q(2, 2);
  Q(0, 0) = 2, Q(1, 1) = 1, Q(1, 0) = 1;
  EXPECT_EQ(weight_aut_profile(twisted_inertia(r)), weight_aut_profile(twisted_inertia(conjugate_stack(r, Q))));
}

TEST(Inertia, InverseInvolution) {
  for (const auto& st : {mu_diagonal_stack(7, 3, {1, 0}), mu_diagonal_stack(13, 3, {1, 2}), rotation(13), mu_diagonal_stack(5, 2, {1, 1})}) {
    const auto& Gr = st.G();
    auto cls = twisted_inertia(st);
    std::set<ClassKey> keys;
    for (const auto& c : cls) keys.insert(c.key());
    for (const auto& c : cls) {
      ClassKey inv{c.y, c.g, Gr.inv[c.alpha]};
      ASSERT_TRUE(st.valid_triple(inv));
      EXPECT_TRUE(keys.count(st.canonical(inv).first));
      // fixed subspace dimension of α on the tangent space
      Matrix M = mat_sub(*st.K, st.group.elems[c.alpha], Matrix::identity(st.n));
      long fixed = static_cast<long>(st.n - rank(*st.K, M));
      long moving = static_cast<long>(st.n) - fixed;
      EXPECT_EQ(st.weight(c.alpha) + st.weight(Gr.inv[c.alpha]), Rational(moving + 2 * fixed));
    }
  }
}

TEST(Specialize, ExamplesOnMuTwo) {
  auto st = mu_diagonal_stack(5, 2, {1});
  auto u = TruncatedSeries::monomial(st.K, 2, 1, 1);
  auto c1 = specialize({{u}, st.mu_gen}, st);
  EXPECT_EQ(c1.y[0], 0u);
  EXPECT_EQ(c1.alpha, st.mu_gen);
  EXPECT_EQ(c1.aut_order, 2u);
  EXPECT_EQ(c1.weight, Rational(1, 2));
  auto c2 = specialize({{u * (TruncatedSeries::constant(st.K, 2, 1) + u.pow(2))}, st.mu_gen}, st);
  EXPECT_EQ(c2.key(), c1.key());
  // constant unramified point
  auto c3 = specialize({{TruncatedSeries::constant(st.K, 1, 3)}, 0}, st);
  EXPECT_EQ(c3.alpha, 0u);
  EXPECT_EQ(c3.aut_order, 1u);
  EXPECT_NE(c3.y[0], 0u);
  // u + u^2 is not equivariant for ρ(ξ) = -1
  EXPECT_THROW(specialize({{u + u.pow(2)}, st.mu_gen}, st), Error);
}

TEST(Specialize, InvariantUnderUnitReparametrization) {
  auto st = mu_diagonal_stack(13, 2, {1});
  const auto& K = st.K;
  auto u = TruncatedSeries::monomial(K, 2, 1, 1);
  auto one = TruncatedSeries::constant(K, 2, 1);
  std::vector<TruncatedSeries> units = {one, TruncatedSeries::constant(K, 2, 2), TruncatedSeries::constant(K, 2, 5) + u.pow(2),
                                        one + u.pow(2) * TruncatedSeries::constant(K, 2, 7) + u.pow(4)};
  for (auto base : {u, u + u.pow(3), u.pow(3) * TruncatedSeries::constant(K, 2, 2)}) {
    auto ref = specialize({{base}, st.mu_gen}, st);
    for (const auto& e : units) {
      // x(εu) for ε ∈ O_F^×: substitute term by term
      TruncatedSeries x(K, 2);
      auto eu = e * u;
      for (long k = 0; k <= base.degree(); ++k)
        if (base.coeff(k)) x = x + eu.pow(static_cast<unsigned>(k)).scale(base.coeff(k));
      EXPECT_EQ(specialize({{x}, st.mu_gen}, st).key(), ref.key());
    }
  }
}

TEST(Specialize, TwistedPointsPickUpDescentData) {
  // y² = 2 has no root in F_5: x = sqrt(2) is fixed by φ only up to the sign g = -1
  auto st = mu_diagonal_stack(5, 2, {1});
  Code s = 0;
  for (Code c = 1; c < st.K->q; ++c)
    if (st.K->mul(c, c) == 2) s = c;
  auto cls = specialize({{TruncatedSeries::constant(st.K, 1, s)}, 0}, st);
  EXPECT_EQ(cls.g, st.mu_gen);
  EXPECT_EQ(cls.aut_order, 1u);
}

TEST(FiberVolume, Examples) {
  auto st = mu_diagonal_stack(5, 2, {1});
  for (const auto& c : twisted_inertia(st)) {
    auto v = fiber_volume(c, 5);
    if (c.y[0] != 0)
      EXPECT_EQ(v, VolumeValue(Rational(1, 5)));
    else if (c.alpha == 0)
      EXPECT_EQ(v, VolumeValue(Rational(1, 10)));
    else
      EXPECT_EQ(v, VolumeValue::q_power(5, Rational(-1, 2)) / VolumeValue(2));
  }
}

TEST(FiberOracle, KummerRouteContainsEveryFiber) {
  std::vector<QuotientStackDesc> suite = {mu_diagonal_stack(5, 2, {1}), mu_diagonal_stack(7, 2, {1, 1}), mu_diagonal_stack(13, 3, {1, 2}),
                                          rotation(7)};
  for (const auto& st : suite) {
    auto res = fiber_volume_oracle(st, 8);
    EXPECT_EQ(res.route, "kummer");
    auto cls = twisted_inertia(st);
    std::set<ClassKey> keys;
    for (const auto& c : cls) {
      keys.insert(c.key());
      auto iv = res.of(c);
      EXPECT_TRUE(iv.contains(fiber_volume(c, st.q))) << st.name << " q=" << st.q << " " << iv.str();
      EXPECT_TRUE(iv.width() <= VolumeValue::q_power(st.q, -6));
    }
    for (const auto& [k, iv] : res.fibers) EXPECT_TRUE(keys.count(k)) << "oracle produced an unknown class";
    EXPECT_EQ(res.total, stringy_volume(st).stringy);
  }
}

TEST(FiberOracle, UnramifiedRouteIsExact) {
  for (const auto& st : {rotation(5), matrix_stack(7, {{{"1", "0"}, {"0", "1"}}})}) {
    auto res = fiber_volume_oracle(st, 1);
    EXPECT_EQ(res.route, "unramified");
    for (const auto& c : twisted_inertia(st)) {
      auto iv = res.of(c);
      EXPECT_EQ(iv.lo, fiber_volume(c, st.q));
      EXPECT_EQ(iv.hi, fiber_volume(c, st.q));
    }
  }
}

TEST(Stringy, ClosedFormTotals) {
  for (std::uint64_t q : {5u, 13u}) {
    auto R = stringy_volume(mu_diagonal_stack(q, 2, {1}));
    EXPECT_EQ(R.stringy, VolumeValue::with_base(q, 1) + VolumeValue::q_power(q, Rational(-1, 2)));
  }
  EXPECT_EQ(stringy_volume(matrix_stack(5, {{{"1", "0"}, {"0", "1"}}})).stringy, VolumeValue(1));
  for (auto [q, N, w] : std::vector<std::tuple<std::uint64_t, long, std::vector<long>>>{
           {5, 2, {1, 1}}, {7, 2, {0, 1}}, {7, 3, {1}}, {5, 3, {1, 2}}, {13, 3, {1, 2}}}) {
    EXPECT_EQ(stringy_volume(mu_diagonal_stack(q, static_cast<std::uint64_t>(N), w)).stringy, oracle::diagonal_total(q, N, w));
  }
}

TEST(Stringy, TwoReadingsOfTheCount) {
  auto R1 = stringy_volume(mu_diagonal_stack(5, 2, {1}));
  EXPECT_FALSE(R1.agree);  // origin classes with α = -1 carry weight 1/2
  auto R2 = stringy_volume(mu_diagonal_stack(5, 2, {1, 1}));
  // -1 on A^2: the α = -1 classes have weight 1 < 2, so the readings differ
  EXPECT_FALSE(R2.agree);
  EXPECT_EQ(R2.stringy, oracle::diagonal_total(5, 2, {1, 1}));
  auto R3 = stringy_volume(matrix_stack(7, {{{"1"}}}));
  EXPECT_TRUE(R3.agree);
}

TEST(Spec, JsonParsingAndErrors) {
  auto j = nlohmann::json::parse(R"({"p":5,"n":1,"group":{"kind":"muN","N":2,"matrix":[["xi"]]}})");
  auto st = build_stack(j);
  EXPECT_EQ(st.order(), 2u);
  EXPECT_EQ(stringy_volume(st).stringy.str(), "1 + 5^{-1/2}");
  EXPECT_THROW(build_stack(nlohmann::json::parse(R"({"p":5,"group":{"kind":"muN","N":2,"matrix":[["xi"]]}})")), Error);
  EXPECT_THROW(build_stack(nlohmann::json::parse(R"({"p":5,"n":1,"group":{"kind":"muN","N":5,"matrix":[["xi"]]}})")), Error);
  EXPECT_THROW(build_stack(nlohmann::json::parse(R"({"p":5,"n":1,"group":{"kind":"cyclic"}})")), Error);
  EXPECT_THROW(build_stack(nlohmann::json::parse(R"({"p":5,"n":1,"group":{"kind":"matrix_list","generators":[[["xi"]]]}})")), Error);
  // non-faithful μ_4 action
  EXPECT_THROW(build_stack(nlohmann::json::parse(R"({"p":5,"n":1,"group":{"kind":"muN","N":4,"weights":[2]}})")), Error);
  // p | |Γ|
  EXPECT_THROW(matrix_stack(3, {{{"0", "1", "0"}, {"0", "0", "1"}, {"1", "0", "0"}}}), Error);
}
