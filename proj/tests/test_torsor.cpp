#include <gtest/gtest.h>

#include <numeric>

#include "oracles/torsor_oracle.hpp"
#include "padicvol/torsor.hpp"

using namespace padicvol;

namespace {

std::size_t class_of(const std::vector<TorsorClass>& cls, const GroupWithFrobenius& G, const Cocycle& c) {
  auto orbit = cocycle_orbit(G, c);
  for (std::size_t i = 0; i < cls.size(); ++i)
    if (orbit.count(cls[i].rep)) return i;
  return cls.size();
}

}  // namespace

TEST(H1, CyclicTwoHasFourClasses) {
  for (std::uint64_t q : {5, 7, 11}) {
    auto cls = enumerate_h1(GroupWithFrobenius::cyclic(2), q);
    EXPECT_EQ(cls.size(), 4u) << q;
  }
}

TEST(H1, CyclicThreeHasNineClassesWhenQIsOneModThree) {
  for (std::uint64_t q : {7, 13}) EXPECT_EQ(enumerate_h1(GroupWithFrobenius::cyclic(3), q).size(), 9u) << q;
  // q = 5: x_γ^4 = 1 forces x_γ = 1, leaving the three unramified classes
  EXPECT_EQ(enumerate_h1(GroupWithFrobenius::cyclic(3), 5).size(), 3u);
}

TEST(H1, TrivialGroup) {
  auto cls = enumerate_h1(GroupWithFrobenius::cyclic(1), 5);
  ASSERT_EQ(cls.size(), 1u);
  EXPECT_EQ(cls[0].kind.tag(), "unramified+strongly_ramified");
}

TEST(H1, RejectsWildGroups) { EXPECT_THROW(enumerate_h1(GroupWithFrobenius::cyclic(5), 5), Error); }

TEST(H1, AbelianCountMatchesPairFormula) {
  const std::vector<std::vector<std::uint64_t>> shapes = {{2}, {3}, {4}, {6}, {2, 2}, {2, 4}, {3, 3}};
  for (const auto& sh : shapes) {
    auto G = GroupWithFrobenius::cyclic(sh[0]);
    for (std::size_t i = 1; i < sh.size(); ++i) G = GroupWithFrobenius::product(G, GroupWithFrobenius::cyclic(sh[i]));
    G.validate();
    for (std::uint64_t q : {5, 7, 11, 13}) {
      if (G.order() % prime_power(q).first == 0) continue;
      EXPECT_EQ(enumerate_h1(G, q).size(), oracle::abelian_h1_count(sh, q)) << G.order() << " q=" << q;
    }
  }
}

TEST(H1, SymmetricThreeMatchesBurnside) {
  auto G = GroupWithFrobenius::symmetric(3);
  G.validate();
  EXPECT_EQ(enumerate_h1(G, 7).size(), oracle::symmetric_h1_count(3, 7));
  EXPECT_EQ(enumerate_h1(G, 7).size(), 8u);
  EXPECT_EQ(enumerate_h1(G, 5).size(), oracle::symmetric_h1_count(3, 5));
  EXPECT_EQ(enumerate_h1(G, 11).size(), oracle::symmetric_h1_count(3, 11));
}

TEST(H1, TwistedFrobeniusGroup) {
  // μ_3 over F_5: φ(k) = -k, so every pair is a cocycle and x_β is absorbed by y ↦ -2y.
  // Kummer: F^×/F^{×3} = Z/3, generated by t.
  auto G = GroupWithFrobenius::cyclic_twisted(3, 5);
  G.validate();
  auto cls = enumerate_h1(G, 5);
  ASSERT_EQ(cls.size(), 3u);
  for (const auto& c : cls) EXPECT_EQ(c.rep.x_beta, 0u);
  // μ_3 over F_7 is constant
  EXPECT_EQ(enumerate_h1(GroupWithFrobenius::cyclic_twisted(3, 7), 7).size(), 9u);
}

TEST(H1, RepresentativesAreMinimalAndClassesPartition) {
  auto G = GroupWithFrobenius::symmetric(3);
  auto cls = enumerate_h1(G, 7);
  std::size_t total = 0;
  for (const auto& c : cls) {
    EXPECT_TRUE(is_cocycle(G, c.rep, 7));
    EXPECT_EQ(*cocycle_orbit(G, c.rep).begin(), c.rep);
    total += c.size;
  }
  std::size_t pairs = 0;
  for (Elem a = 0; a < G.order(); ++a)
    for (Elem b = 0; b < G.order(); ++b) pairs += is_cocycle(G, {a, b}, 7);
  EXPECT_EQ(total, pairs);
}

TEST(Classify, Examples) {
  auto G = GroupWithFrobenius::cyclic(2);
  EXPECT_EQ(classify(G, {1, 0}).tag(), "unramified");
  EXPECT_EQ(classify(G, {0, 1}).tag(), "strongly_ramified");
  EXPECT_EQ(classify(G, {0, 0}).tag(), "unramified+strongly_ramified");
  EXPECT_EQ(classify(G, {1, 1}).tag(), "general");
}

TEST(Classify, ConstantOnClasses) {
  for (auto G : {GroupWithFrobenius::symmetric(3), GroupWithFrobenius::cyclic(6)})
    for (const auto& c : enumerate_h1(G, 7))
      for (const auto& o : cocycle_orbit(G, c.rep)) EXPECT_EQ(classify(G, o).tag(), c.kind.tag());
}

TEST(OrbitDecomposition, QuadraticExamples) {
  auto G = GroupWithFrobenius::cyclic(2);
  EXPECT_EQ(orbit_decomposition(G, {0, 0}), (std::vector<AlgebraFactor>{{1, 1, 2}}));
  EXPECT_EQ(orbit_decomposition(G, {0, 1}), (std::vector<AlgebraFactor>{{1, 2, 1}}));
  EXPECT_EQ(orbit_decomposition(G, {1, 0}), (std::vector<AlgebraFactor>{{2, 1, 1}}));
}

TEST(OrbitDecomposition, DegreesSumToGroupOrder) {
  for (auto G : {GroupWithFrobenius::symmetric(3), GroupWithFrobenius::cyclic(6), GroupWithFrobenius::cyclic_twisted(4, 7)})
    for (std::uint64_t q : {7, 13})
      for (const auto& c : enumerate_h1(G, q)) {
        std::size_t s = 0;
        for (const auto& f : orbit_decomposition(G, c.rep)) s += f.e * f.f * f.mult;
        EXPECT_EQ(s, G.order());
      }
}

TEST(OrbitDecomposition, SextetOverFSeven) {
  // (g, g^2) on Z/6: γ-orbits have size 3, β joins pairs of them into one orbit of size 6
  auto G = GroupWithFrobenius::cyclic(6);
  EXPECT_EQ(orbit_decomposition(G, {1, 2}), (std::vector<AlgebraFactor>{{2, 3, 1}}));
  EXPECT_EQ(orbit_decomposition(G, {2, 2}), (std::vector<AlgebraFactor>{{1, 3, 2}}));
}

TEST(Twist, ReachesStronglyRamified) {
  auto G = GroupWithFrobenius::cyclic(4);
  auto T = twist_to_strongly_ramified(G, {2, 1});
  EXPECT_EQ(T.result, (Cocycle{0, 1}));
  EXPECT_EQ(T.twist, (Cocycle{2, 0}));
  EXPECT_TRUE(T.kind.strongly_ramified);
  auto S = twist_to_strongly_ramified(G, {0, 3});
  EXPECT_EQ(S.twist, (Cocycle{0, 0}));
  EXPECT_EQ(S.result, (Cocycle{0, 3}));
}

TEST(Twist, RoundTripReturnsOriginalClass) {
  for (auto G : {GroupWithFrobenius::symmetric(3), GroupWithFrobenius::cyclic_twisted(4, 7)}) {
    auto cls = enumerate_h1(G, 13);
    for (const auto& c : cls) {
      auto T = twist_to_strongly_ramified(G, c.rep);
      EXPECT_TRUE(is_cocycle(T.inner, T.result, 13));
      auto back = twist_by(T.inner, T.result, T.inner.inv[T.twist.x_beta]);
      EXPECT_EQ(back.inner.phi, G.phi);
      EXPECT_EQ(class_of(cls, G, back.result), class_of(cls, G, c.rep));
    }
  }
}

TEST(InertiaSubgroup, Examples) {
  auto Z2 = GroupWithFrobenius::cyclic(2);
  auto I = inertia_subgroup(Z2, {0, 1});
  EXPECT_EQ(I.N, 2u);
  EXPECT_EQ(I.elements, (std::vector<Elem>{0, 1}));
  EXPECT_EQ(I.character.at(1), Rational(1, 2));
  EXPECT_EQ(inertia_subgroup(Z2, {0, 0}).N, 1u);
  EXPECT_THROW(inertia_subgroup(Z2, {1, 0}), Error);

  auto Z6 = GroupWithFrobenius::cyclic(6);
  auto J = inertia_subgroup(Z6, {0, 2});
  EXPECT_EQ(J.N, 3u);
  EXPECT_EQ(J.elements, (std::vector<Elem>{0, 2, 4}));
  EXPECT_EQ(J.character.at(2), Rational(1, 3));
  EXPECT_EQ(J.character.at(4), Rational(2, 3));
}

TEST(InertiaSubgroup, FixedPointsActTransitivelyOnComponents) {
  // Γ^φ acts on the torsor by right multiplication; for (1, x) the components are the cosets ⟨x⟩y
  for (auto G : {GroupWithFrobenius::symmetric(3), GroupWithFrobenius::cyclic(6)})
    for (const auto& c : enumerate_h1(G, 7)) {
      if (!c.kind.strongly_ramified) continue;
      auto I = inertia_subgroup(G, c.rep);
      Cocycle s{0, I.generator};
      auto orbits = torsor_orbits(G, s);
      for (const auto& o : orbits) EXPECT_EQ(o.size(), I.N);
      std::set<std::size_t> reached;
      for (Elem h = 0; h < G.order(); ++h) {
        if (G.phi[h] != h) continue;
        for (std::size_t i = 0; i < orbits.size(); ++i)
          if (std::binary_search(orbits[i].begin(), orbits[i].end(), h)) reached.insert(i);  // image of the identity
      }
      EXPECT_EQ(reached.size(), orbits.size());
    }
}
