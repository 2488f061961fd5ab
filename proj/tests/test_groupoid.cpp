#include <gtest/gtest.h>

#include <algorithm>

#include "nlg/groupoid.hpp"
#include "nlg/groupoid_json.hpp"
#include "oracles.hpp"

using namespace nlg::fin;

namespace {

// Two copies of the unit bundle glued over the same base: each element only
// reaches its own copy, so the action map misses half of every fiber.
FinitePGB doubled_unit_bundle(const FiniteGroupoid& G) {
  const FinitePGB U = unit_bundle(G);
  FinitePGB P;
  P.name = "doubled";
  P.G = G;
  P.base = U.base;
  const int n = static_cast<int>(U.size());
  const std::size_t na = G.num_arrows();
  for (int copy = 0; copy < 2; ++copy)
    for (int p = 0; p < n; ++p) {
      P.total.push_back(U.total[p] + (copy ? "'" : ""));
      P.proj.push_back(U.proj[p]);
      P.moment.push_back(U.moment[p]);
    }
  P.act.assign(P.size() * na, kNone);
  for (int copy = 0; copy < 2; ++copy)
    for (int p = 0; p < n; ++p)
      for (std::size_t g = 0; g < na; ++g) {
        const int q = U.action(p, static_cast<int>(g));
        if (q != kNone) P.action_entry(copy * n + p, static_cast<int>(g)) = copy * n + q;
      }
  return P;
}

// One point over one base point acted on trivially by the group Z_3.
FinitePGB trivial_action_bundle() {
  FinitePGB P;
  P.name = "trivial";
  P.G = transitive_groupoid(1, 3);
  P.base = {"m"};
  P.total = {"p"};
  P.proj = {0};
  P.moment = {0};
  P.act.assign(P.G.num_arrows(), 0);
  return P;
}

}  // namespace

TEST(Groupoid, BuiltinsAreValid) {
  for (const auto& G : {pair_groupoid(4), translation_groupoid(3), transitive_groupoid(3, 2)}) {
    const GroupoidReport r = validate_groupoid(G);
    EXPECT_TRUE(r.valid()) << G.name << (r.violations.empty() ? "" : r.violations.front());
    EXPECT_TRUE(oracle::non_associative(G).empty());
  }
  EXPECT_EQ(pair_groupoid(4).num_arrows(), 16u);
  EXPECT_EQ(translation_groupoid(3).num_arrows(), 9u);
}

TEST(Groupoid, ShuffledStaysValid) {
  for (std::uint64_t s = 0; s < 5; ++s) EXPECT_TRUE(validate_groupoid(shuffled(pair_groupoid(4), s)).valid());
}

TEST(Groupoid, CorruptedEntryReportsExactlyTheBadTriples) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    FiniteGroupoid G = shuffled(translation_groupoid(3), seed);
    // Redirect one product to another arrow with the same endpoints when possible.
    const int g = static_cast<int>(seed % G.num_arrows());
    int h = kNone;
    for (int k = 0; k < static_cast<int>(G.num_arrows()); ++k)
      if (G.composable(g, k) && G.product(g, k) != G.unit[G.s[g]]) { h = k; break; }
    ASSERT_NE(h, kNone);
    const int old = G.product(g, h);
    for (int k = 0; k < static_cast<int>(G.num_arrows()); ++k)
      if (k != old && G.s[k] == G.s[old] && G.t[k] == G.t[old]) { G.product_entry(g, h) = k; break; }
    if (G.product(g, h) == old) continue;
    const GroupoidReport r = validate_groupoid(G);
    const auto expected = oracle::non_associative(G);
    ASSERT_FALSE(expected.empty());
    std::set<std::array<int, 3>> got(r.associativity.begin(), r.associativity.end());
    EXPECT_EQ(got, expected);
    EXPECT_FALSE(r.valid());
  }
}

TEST(Groupoid, BrokenUnitAndInverseDetected) {
  FiniteGroupoid G = pair_groupoid(3);
  std::swap(G.inv[1], G.inv[2]);
  EXPECT_FALSE(validate_groupoid(G).valid());
  FiniteGroupoid H = pair_groupoid(3);
  H.unit[0] = 1;
  EXPECT_FALSE(validate_groupoid(H).valid());
}

TEST(Division, PairGroupoidExample) {
  const FinitePGB U = unit_bundle(pair_groupoid(3));
  // delta((1,2), (1,3)) = (2,3)
  EXPECT_EQ(U.G.arrows[division(U, 1, 2)], U.G.arrows[5]);
  EXPECT_EQ(division(U, 1, 2), 5);
}

TEST(Division, UnitBundleGivesInverseTimesArrow) {
  const FiniteGroupoid G = translation_groupoid(3);
  const FinitePGB U = unit_bundle(G);
  for (int g = 0; g < static_cast<int>(G.num_arrows()); ++g)
    for (int h = 0; h < static_cast<int>(G.num_arrows()); ++h) {
      if (G.s[g] != G.s[h]) continue;
      EXPECT_EQ(division(U, g, h), G.product(G.inv[g], h));
    }
}

TEST(Division, ErrorKinds) {
  const FinitePGB U = unit_bundle(pair_groupoid(3));
  try {
    division(U, 0, 3);  // (1,1) and (2,1): different sources
    FAIL();
  } catch (const DivisionError& e) {
    EXPECT_EQ(e.kind(), DivisionError::Kind::DifferentFibers);
  }
  const FinitePGB D = doubled_unit_bundle(pair_groupoid(2));
  try {
    division(D, 0, 4);
    FAIL();
  } catch (const DivisionError& e) {
    EXPECT_EQ(e.kind(), DivisionError::Kind::NoArrow);
  }
  const FinitePGB T = trivial_action_bundle();
  try {
    division(T, 0, 0);
    FAIL();
  } catch (const DivisionError& e) {
    EXPECT_EQ(e.kind(), DivisionError::Kind::MultipleArrows);
  }
}

TEST(Principality, UnitBundlesArePrincipal) {
  for (const auto& G : {pair_groupoid(4), translation_groupoid(3)}) {
    const FinitePGB U = unit_bundle(G);
    EXPECT_TRUE(validate_principality(U).principal());
    EXPECT_TRUE(check_division_identities(U).ok());
  }
}

TEST(Principality, RedirectedActionFailsAtThatElement) {
  FinitePGB U = unit_bundle(pair_groupoid(3));
  // p0 = (1,1); send p0 * (1,2) to p0 * (1,3) instead.
  U.action_entry(0, 1) = U.action(0, 2);
  const PrincipalityReport r = validate_principality(U);
  EXPECT_FALSE(r.principal());
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(r.failures[0].p, 0);
  EXPECT_EQ(r.failures[0].missing, std::vector<int>{1});
  EXPECT_EQ(r.failures[0].duplicated, std::vector<int>{2});
}

TEST(Principality, DoubledUnitBundleFailsSurjectivity) {
  const FinitePGB D = doubled_unit_bundle(pair_groupoid(3));
  const PrincipalityReport r = validate_principality(D);
  EXPECT_TRUE(r.action_violations.empty());
  EXPECT_TRUE(r.injective());
  EXPECT_FALSE(r.surjective());
  EXPECT_EQ(r.failures.size(), D.size());
}

TEST(Principality, TrivialActionFailsInjectivity) {
  const PrincipalityReport r = validate_principality(trivial_action_bundle());
  EXPECT_TRUE(r.action_violations.empty());
  EXPECT_FALSE(r.injective());
  EXPECT_TRUE(r.surjective());
}

TEST(Pullback, FibersAndUnitBundleCase) {
  const FiniteGroupoid G = pair_groupoid(4);
  const FinitePGB P = pullback_trivial_bundle(G, {0, 1, 1, 3, 2});
  EXPECT_EQ(P.size(), 5u * 4u);
  for (int m = 0; m < 5; ++m) EXPECT_EQ(P.fiber(m).size(), G.num_objects());
  EXPECT_TRUE(validate_principality(P).principal());
  EXPECT_TRUE(check_division_identities(relabeled(P, 3)).ok());

  // f = identity: the pullback is the unit bundle up to labels.
  const FinitePGB I = pullback_trivial_bundle(G, {0, 1, 2, 3});
  const FinitePGB U = unit_bundle(G);
  ASSERT_EQ(I.size(), U.size());
  std::vector<int> sigma(4);
  for (int m = 0; m < 4; ++m) sigma[m] = G.unit[m];
  EXPECT_EQ(section_isomorphism_defects(U, sigma), 0u);
}

TEST(Pullback, RejectsBadMaps) {
  EXPECT_THROW(pullback_trivial_bundle(pair_groupoid(2), {0, 2}), std::invalid_argument);
  EXPECT_THROW(pullback_trivial_bundle(pair_groupoid(2), {0, 1}, {"a"}), std::invalid_argument);
}

TEST(RandomBundles, SectionsTrivialize) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RandomBundle b = random_principal_bundle(seed);
    EXPECT_TRUE(validate_groupoid(b.P.G).valid()) << seed;
    EXPECT_TRUE(validate_principality(b.P).principal()) << seed;
    EXPECT_TRUE(check_division_identities(b.P).ok()) << seed;
    EXPECT_EQ(section_isomorphism_defects(b.P, b.section), 0u) << seed;
    const SectionFamily fam = random_section_family(b.P, 3, seed + 100);
    EXPECT_TRUE(check_cocycle(b.P, fam, transition_cocycle(b.P, fam)).ok()) << seed;
  }
}

TEST(RandomBundles, BrokenSectionIsDetected) {
  const RandomBundle b = random_principal_bundle(4);
  std::vector<int> sigma = b.section;
  const auto fib = b.P.fiber(0);
  sigma[0] = sigma[0] == fib[0] ? fib[1] : fib[0];
  sigma[1] = sigma[0];  // no longer a section over m = 1
  EXPECT_GT(section_isomorphism_defects(b.P, sigma), 0u);
}

TEST(Cocycle, SingleChartGivesUnits) {
  const FinitePGB P = pullback_trivial_bundle(pair_groupoid(3), {0, 2, 1, 1});
  SectionFamily fam;
  fam.cover = {{0, 1, 2, 3}};
  fam.sections = {{}};
  for (int m = 0; m < 4; ++m) fam.sections[0].push_back(P.fiber(m).back());
  const Cocycle phi = transition_cocycle(P, fam);
  for (int m = 0; m < 4; ++m) EXPECT_EQ(phi[0][0][m], P.G.unit[P.moment[fam.sections[0][m]]]);
  EXPECT_TRUE(check_cocycle(P, fam, phi).ok());
}

TEST(Cocycle, ConstantShiftGivesConstantTransition) {
  const FiniteGroupoid Z3 = transitive_groupoid(1, 3);
  const FinitePGB P = pullback_trivial_bundle(Z3, {0, 0, 0});
  const int g = 1;  // a non-unit arrow
  ASSERT_NE(g, Z3.unit[0]);
  SectionFamily fam;
  fam.cover = {{0, 1, 2}, {0, 1, 2}};
  fam.sections = {{}, {}};
  for (int m = 0; m < 3; ++m) {
    const int p = P.fiber(m)[0];
    fam.sections[0].push_back(p);
    fam.sections[1].push_back(P.action(p, g));
  }
  const Cocycle phi = transition_cocycle(P, fam);
  for (int m = 0; m < 3; ++m) {
    EXPECT_EQ(phi[0][1][m], g);
    EXPECT_EQ(phi[1][0][m], Z3.inv[g]);
  }
  EXPECT_TRUE(check_cocycle(P, fam, phi).ok());
}

TEST(Cocycle, ThreePieceCoverOverPair4) {
  const FinitePGB P = pullback_trivial_bundle(pair_groupoid(4), {0, 1, 2, 3, 3, 2, 1, 0});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SectionFamily fam = random_section_family(P, 3, seed);
    ASSERT_EQ(fam.cover.size(), 3u);
    std::vector<int> seen(8, 0);
    for (const auto& U : fam.cover)
      for (int m : U) seen[m] = 1;
    EXPECT_EQ(std::count(seen.begin(), seen.end(), 1), 8);
    const Cocycle phi = transition_cocycle(P, fam);
    const CocycleReport r = check_cocycle(P, fam, phi);
    EXPECT_TRUE(r.ok());
    EXPECT_GT(r.triple_points, 0u);
  }
}

TEST(Cocycle, CorruptedTransitionDetected) {
  const FinitePGB P = pullback_trivial_bundle(pair_groupoid(4), {0, 1, 2, 3, 3, 2, 1, 0});
  const SectionFamily fam = random_section_family(P, 3, 9);
  Cocycle phi = transition_cocycle(P, fam);
  bool changed = false;
  for (std::size_t j = 0; j < phi.size() && !changed; ++j)
    for (std::size_t i = 0; i < phi.size() && !changed; ++i)
      for (std::size_t m = 0; m < phi[j][i].size() && !changed; ++m)
        if (i != j && phi[j][i][m] != kNone) {
          const int a = phi[j][i][m];
          for (int k = 0; k < static_cast<int>(P.G.num_arrows()); ++k)
            if (k != a && P.G.s[k] == P.G.s[a]) {
              phi[j][i][m] = k;
              changed = true;
              break;
            }
        }
  ASSERT_TRUE(changed);
  EXPECT_FALSE(check_cocycle(P, fam, phi).ok());
}

TEST(Sections, ValidationRejectsNonSections) {
  const FinitePGB P = pullback_trivial_bundle(pair_groupoid(2), {0, 1});
  SectionFamily fam;
  fam.cover = {{0, 1}};
  fam.sections = {{P.fiber(1)[0], P.fiber(1)[0]}};
  EXPECT_THROW(validate_sections(P, fam), std::invalid_argument);
  fam.sections = {{P.fiber(0)[0]}};
  EXPECT_THROW(validate_sections(P, fam), std::invalid_argument);
}

TEST(Json, RoundTrip) {
  const FiniteGroupoid G = shuffled(translation_groupoid(3), 5);
  const FiniteGroupoid G2 = groupoid_from_json(to_json(G));
  EXPECT_EQ(G2.comp, G.comp);
  EXPECT_EQ(G2.arrows, G.arrows);
  EXPECT_EQ(G2.inv, G.inv);
  const FinitePGB P = random_principal_bundle(3).P;
  const FinitePGB P2 = bundle_from_json(to_json(P));
  EXPECT_EQ(P2.act, P.act);
  EXPECT_EQ(P2.total, P.total);
  EXPECT_EQ(P2.proj, P.proj);
  EXPECT_EQ(to_json(P2), to_json(P));
}

TEST(Json, MalformedInputRejected) {
  nlohmann::json j = to_json(pair_groupoid(2));
  j.erase("objects");
  EXPECT_THROW(groupoid_from_json(j), std::invalid_argument);
  nlohmann::json k = to_json(unit_bundle(pair_groupoid(2)));
  k["total"][0]["proj"] = 99;
  EXPECT_THROW(bundle_from_json(k), std::invalid_argument);
}
