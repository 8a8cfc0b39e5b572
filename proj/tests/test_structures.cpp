#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace clonebench;

namespace {

std::vector<Rational> rats(std::initializer_list<Rational> xs) { return std::vector<Rational>(xs); }

}  // namespace

TEST(ParseStructure, DirectedCycle) {
  FiniteStructure s = parse_structure("domain 3\nrelation E 2\n0 1\n1 2\n2 0\n");
  EXPECT_EQ(s.domain_size(), 3);
  ASSERT_EQ(s.relations().size(), 1u);
  EXPECT_EQ(s.relations()[0].tuples.size(), 3u);
}

TEST(ParseStructure, SingletonWithoutRelations) {
  FiniteStructure s = parse_structure("domain 1\n");
  EXPECT_EQ(s.domain_size(), 1);
  EXPECT_TRUE(s.relations().empty());
}

TEST(ParseStructure, RejectsOutOfRangeElement) {
  try {
    parse_structure("domain 3\nrelation E 2\n0 5\n");
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("element out of range"), std::string::npos);
  }
}

TEST(ParseStructure, RejectsArityMismatchWithLineNumber) {
  try {
    parse_structure("domain 3\nrelation E 2\n0 1 2\n");
    FAIL() << "expected an error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(ParseStructure, RejectsGarbage) {
  EXPECT_THROW(parse_structure("domian 3\n"), ParseError);
  EXPECT_THROW(parse_structure("relation E 2\n"), InputError);
}

TEST(Automorphisms, KnownGroupSizes) {
  auto corpus = oracle::corpus();
  EXPECT_EQ(automorphisms(corpus[0].structure).size(), 3u);  // rotations of the 3-cycle
  EXPECT_EQ(automorphisms(FiniteStructure(3, {})).size(), 6u);
  EXPECT_EQ(automorphisms(corpus[5].structure).size(), 1u);  // linear order
  EXPECT_EQ(automorphisms(corpus[3].structure).size(), 120u);  // Petersen
}

TEST(Automorphisms, MatchBruteForceOnCorpus) {
  for (const auto& [name, s] : oracle::corpus()) {
    auto expected = oracle::brute_automorphisms(s);
    auto got = automorphisms(s);
    ASSERT_EQ(got.size(), expected.size()) << name;
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i].images, expected[i]) << name;
  }
}

TEST(Orbits, DirectedCycleHasThreeBinaryOrbits) {
  auto space = orbits(oracle::corpus()[0].structure, 2);
  EXPECT_EQ(space.size(), 3);
  EXPECT_EQ(space.representative(0), (Tuple{0, 0}));
  EXPECT_EQ(space.representative(1), (Tuple{0, 1}));
  EXPECT_EQ(space.representative(2), (Tuple{0, 2}));
}

TEST(Orbits, PureThreeSetAndTransitivity) {
  EXPECT_EQ(orbits(FiniteStructure(3, {}), 2).size(), 2);
  EXPECT_EQ(orbits(oracle::corpus()[3].structure, 1).size(), 1);
}

TEST(Orbits, MatchNaiveClosureOnCorpus) {
  for (const auto& [name, s] : oracle::corpus()) {
    auto group = oracle::brute_automorphisms(s);
    for (int k = 1; k <= 3; ++k)
      EXPECT_EQ(oracle::partition_of(orbits(s, k)), oracle::orbit_partition(s, k, group)) << name << " k=" << k;
  }
}

TEST(Orbits, SameOrbitMeansListedAutomorphismMapsBetween) {
  for (const auto& [name, s] : oracle::corpus()) {
    auto group = automorphisms(s);
    auto space = orbits(s, 2, group);
    for (std::uint64_t c = 0; c < space.index().size(); ++c) {
      Tuple t = space.decode(c);
      const Tuple& rep = space.representative(space.index()[c]);
      EXPECT_LE(rep, t) << name;
      bool mapped = false;
      for (const Permutation& g : group) mapped = mapped || g.apply(rep) == t;
      EXPECT_TRUE(mapped) << name;
    }
  }
}

TEST(Orbits, CapIsEnforced) {
  StructureCaps caps;
  caps.max_tuples = 100;
  EXPECT_THROW(orbits(oracle::corpus()[3].structure, 3, caps), CapExceeded);
  EXPECT_THROW(orbits(FiniteStructure(2, {}), 0), InputError);
}

TEST(Patterns, Examples) {
  auto dlo = SymbolicStructure::dlo();
  auto set = SymbolicStructure::pure_set();
  EXPECT_EQ(pattern_of(dlo, rats({Rational(7, 2), Rational(6, 5), Rational(7, 2)})).code, (std::vector<int>{1, 0, 1}));
  EXPECT_EQ(pattern_of(set, rats({7, 7, 9})).code, (std::vector<int>{0, 0, 1}));
  EXPECT_EQ(pattern_of(dlo, rats({0, 1})), pattern_of(dlo, rats({-5, 100})));
}

TEST(Patterns, CountsMatchBruteForce) {
  for (int k = 1; k <= 5; ++k) {
    EXPECT_EQ(static_cast<std::size_t>(enumerate_patterns(SymbolicStructure::dlo(), k).size()),
              oracle::count_weak_orders(k));
    EXPECT_EQ(static_cast<std::size_t>(enumerate_patterns(SymbolicStructure::pure_set(), k).size()),
              oracle::count_partitions(k));
  }
  EXPECT_EQ(enumerate_patterns(SymbolicStructure::dlo(), 3).size(), 13);
  EXPECT_EQ(enumerate_patterns(SymbolicStructure::pure_set(), 3).size(), 5);
}

TEST(Patterns, CountEqualsDistinctPatternsOnGrid) {
  for (auto s : {SymbolicStructure::dlo(), SymbolicStructure::pure_set()}) {
    for (int k = 1; k <= 4; ++k) {
      std::set<std::vector<int>> seen;
      for (const auto& f : oracle::all_maps(k)) {
        std::vector<Rational> t;
        for (int x : f) t.emplace_back(x * 3 - 2, 2);
        seen.insert(pattern_of(s, t).code);
      }
      EXPECT_EQ(static_cast<int>(seen.size()), enumerate_patterns(s, k).size());
    }
  }
}

TEST(Patterns, RepresentativesClassifyToThemselves) {
  for (auto s : {SymbolicStructure::dlo(), SymbolicStructure::pure_set()}) {
    auto space = enumerate_patterns(s, 4);
    for (int id = 0; id < space.size(); ++id) EXPECT_EQ(space.classify(space.representative(id)), id);
  }
}

TEST(Patterns, InvariantUnderConstructedMaps) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 5);
  auto dlo = SymbolicStructure::dlo();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<Rational, Rational>> pts;
    Rational x = num(rng), y = num(rng);
    for (int i = 0; i < 4; ++i) {
      pts.emplace_back(x, y);
      x += Rational(1 + std::abs(num(rng)), den(rng));
      y += Rational(1 + std::abs(num(rng)), den(rng));
    }
    PLMap m = PLMap::interpolate(pts);
    std::vector<Rational> t;
    for (int i = 0; i < 5; ++i) t.emplace_back(num(rng), den(rng));
    std::vector<Rational> img;
    for (const auto& v : t) img.push_back(m(v));
    EXPECT_EQ(pattern_of(dlo, t), pattern_of(dlo, img));
  }
}

TEST(TypeRestriction, Examples) {
  auto dlo = SymbolicStructure::dlo();
  auto p3 = enumerate_patterns(dlo, 3);
  auto p2 = enumerate_patterns(dlo, 2);
  int t = p3.classify(Pattern{SymbolicKind::DenseLinearOrder, {1, 0, 1}});
  EXPECT_EQ(p2.pattern(type_restriction(p3, t, {0, 1}, p2)).code, (std::vector<int>{1, 0}));
  for (int id = 0; id < p3.size(); ++id) EXPECT_EQ(type_restriction(p3, id, {0, 1, 2}, p3), id);

  auto cyc = oracle::corpus()[0].structure;
  auto o2 = orbits(cyc, 2);
  int edge = o2.classify({0, 1});
  int reversed = o2.classify({1, 0});
  EXPECT_NE(edge, reversed);
  EXPECT_EQ(type_restriction(o2, edge, {1, 0}, o2), reversed);
  EXPECT_THROW(type_restriction(o2, edge, {0, 2}, o2), InputError);
}

TEST(TypeRestriction, CommutesWithClassification) {
  std::mt19937_64 rng(11);
  for (const auto& [name, s] : oracle::corpus()) {
    auto o3 = orbits(s, 3);
    auto o2 = orbits(s, 2);
    std::uniform_int_distribution<int> el(0, s.domain_size() - 1), idx(0, 2);
    for (int trial = 0; trial < 50; ++trial) {
      Tuple a{el(rng), el(rng), el(rng)};
      std::vector<int> u{idx(rng), idx(rng)};
      EXPECT_EQ(o2.classify({a[u[0]], a[u[1]]}), type_restriction(o3, o3.classify(a), u, o2)) << name;
    }
  }
  auto dlo = SymbolicStructure::dlo();
  auto p3 = enumerate_patterns(dlo, 3);
  auto p2 = enumerate_patterns(dlo, 2);
  std::uniform_int_distribution<int> v(-3, 3), idx(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rational> a{v(rng), v(rng), v(rng)};
    std::vector<int> u{idx(rng), idx(rng)};
    EXPECT_EQ(p2.classify(std::vector<Rational>{a[u[0]], a[u[1]]}), type_restriction(p3, p3.classify(a), u, p2));
  }
}

TEST(PartialAutomorphism, Examples) {
  auto dlo = SymbolicStructure::dlo();
  auto m = witness_partial_automorphism(dlo, rats({0, 1}), rats({10, 20}));
  ASSERT_TRUE(m);
  EXPECT_EQ((*m)(0), 10);
  EXPECT_EQ((*m)(1), 20);
  EXPECT_TRUE(m->plmap().is_automorphism());
  EXPECT_FALSE(witness_partial_automorphism(dlo, rats({0, 1}), rats({1, 0})));
  auto m2 = witness_partial_automorphism(dlo, rats({2, 2, 5}), rats({0, 0, 1}));
  ASSERT_TRUE(m2);
  EXPECT_EQ((*m2)(2), 0);
  EXPECT_EQ((*m2)(5), 1);
}

TEST(PartialAutomorphism, PureSetPermutation) {
  auto set = SymbolicStructure::pure_set();
  auto p = witness_partial_automorphism(set, rats({3, 4, 3}), rats({4, 9, 4}));
  ASSERT_TRUE(p);
  EXPECT_EQ((*p)(3), 4);
  EXPECT_EQ((*p)(4), 9);
  EXPECT_NE((*p)(9), 4);
  EXPECT_FALSE(witness_partial_automorphism(set, rats({1, 1}), rats({1, 2})));
}

TEST(PLMap, ParseSerializeRoundTrip) {
  PLMap m = PLMap::interpolate({{0, 1}, {1, 5}, {3, 6}});
  PLMap back = PLMap::parse(m.serialize());
  EXPECT_EQ(m, back);
  EXPECT_EQ(compose(m, m.inverse()), PLMap::identity());
  EXPECT_THROW(PLMap::parse("piece -inf 0 affine 1 0\n"), InputError);
}
