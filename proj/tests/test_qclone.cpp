#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "random_inputs.hpp"

using namespace clonebench;
using namespace random_inputs;

namespace {

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(CLONEBENCH_DATA_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t check_monotone(const QFunction& f, std::mt19937_64& rng, int pairs) {
  std::size_t violations = 0;
  for (int t = 0; t < pairs; ++t) {
    auto [u, v] = random_pair(rng, f.arity(), -15, 15);
    if (!(f(u) < f(v))) ++violations;
  }
  return violations;
}

}  // namespace

TEST(Member, Examples) {
  QFunction f = make_member(2, 1, 0, PLMap::identity());
  EXPECT_EQ(f({5, 7}), 5);
  EXPECT_EQ(xi(f), 1);

  QFunction g = make_member(1, 1, 0, PLMap::translation(3), {{{-1}, 0}});
  EXPECT_EQ(g({-1}), 0);
  for (int q = 1; q < 20; ++q) EXPECT_EQ(g({Rational(q, 3)}), Rational(q, 3) + 3);

  QFunction h = make_member(2, 2, 2, PLMap::translation(4), {{{0, 1}, 5}, {{1, 0}, 2}});
  EXPECT_EQ(h({0, 1}), 5);
  EXPECT_EQ(h({1, 0}), 2);
  EXPECT_EQ(xi(h), 2);
  std::mt19937_64 rng(1);
  EXPECT_EQ(check_monotone(h, rng, 1000), 0u);
  EXPECT_LT(h({1, 1}), h({2, 3}));
}

TEST(Member, RejectsBadParameters) {
  EXPECT_THROW(make_member(2, 3, 0, PLMap::identity()), InputError);
  EXPECT_THROW(make_member(1, 1, 0, uniqueness_map(0)), InputError);
  EXPECT_THROW(make_member(1, 1, 0, PLMap::identity(), {{{1}, 0}}), InputError);
  EXPECT_THROW(make_member(1, 1, 0, PLMap::translation(3), {{{-1}, 3}}), ConsistencyError);
  EXPECT_THROW(make_member(2, 1, 5, PLMap::identity(), {{{0, 0}, 2}, {{1, 1}, 1}}), ConsistencyError);
}

TEST(Member, ParsedFromFile) {
  QFunction f = parse_member(read_data("member.q"));
  EXPECT_EQ(f.arity(), 2);
  EXPECT_EQ(xi(f), 2);
  EXPECT_EQ(f({-1, -1}), 0);
  EXPECT_EQ(f({0, -2}), 1);
  EXPECT_EQ(f({4, 9}), 12);
  EXPECT_THROW(parse_member("arity 2\neventual 1 0 nope\n"), InputError);
  EXPECT_THROW(parse_member("arity 2\nbogus\n"), ParseError);
}

TEST(Member, EventualRegimeIsExact) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + trial % 3;
    QFunction f = random_composite(rng, n, 2);
    for (int s = 0; s < 50; ++s) {
      Point u;
      for (int j = 0; j < n; ++j) u.push_back(f.threshold() + Rational(1 + rng() % 50, 1 + rng() % 5));
      EXPECT_EQ(f(u), f.alpha()(u[f.coordinate() - 1])) << f.to_string();
    }
  }
}

TEST(Member, PolymorphismOnRandomPairs) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    QFunction f = random_composite(rng, 1 + trial % 3, 2);
    EXPECT_EQ(check_monotone(f, rng, 1000), 0u) << f.to_string();
  }
}

TEST(Compose, Examples) {
  QFunction f = make_member(2, 1, 0, PLMap::translation(2), {{{-1, -1}, 0}});
  QFunction same = compose_members(f, {QFunction::selector(2, 1), QFunction::selector(2, 2)});
  std::mt19937_64 rng(4);
  for (int s = 0; s < 100; ++s) {
    Point u{random_rational(rng, -5, 5), random_rational(rng, -5, 5)};
    EXPECT_EQ(same(u), f(u));
  }

  QFunction g1 = make_unary_member(uniqueness_map(0));
  QFunction g2 = make_member(1, 1, 0, PLMap::translation(3));
  QFunction h = make_member(2, 2, 0, PLMap::identity());
  QFunction c = compose_members(h, {g1, g2});
  EXPECT_EQ(xi(c), 1);
  EXPECT_EQ(xi(compose_members(f, {g1, g2})), 1);

  QFunction u1 = make_member(1, 1, 1, PLMap::affine(2, 1));
  QFunction u2 = make_member(1, 1, 3, PLMap::translation(-5));
  QFunction uu = compose_members(u1, {u2});
  EXPECT_EQ(uu.threshold(), 6);  // u2 must exceed u1's threshold: x - 5 > 1
  for (int s = 0; s < 100; ++s) {
    Rational x = uu.threshold() + Rational(1 + rng() % 100, 1 + rng() % 4);
    EXPECT_EQ(uu({x}), 2 * (x - 5) + 1);
  }
}

TEST(Compose, XiIsAHomomorphism) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    int m = 1 + static_cast<int>(rng() % 3);
    QFunction f = random_composite(rng, m, 1);
    std::vector<QFunction> gs;
    for (int j = 0; j < m; ++j) gs.push_back(random_composite(rng, n, 1));
    QFunction c = compose_members(f, gs);
    EXPECT_EQ(xi(c), xi(gs[xi(f) - 1]));
  }
}

TEST(ExtendRestriction, AgreesAndHasTargetCoordinate) {
  QFunction f = make_member(2, 1, 0, PLMap::identity());
  std::vector<DataPoint> p;
  for (const Point& u : sample_points(2, 5, 0)) p.emplace_back(u, f(u));
  for (int t = 1; t <= 2; ++t) {
    QFunction h = extend_restriction(p, t, 2);
    for (const auto& [u, v] : p) EXPECT_EQ(h(u), v);
    EXPECT_EQ(xi(h), t);
    std::mt19937_64 rng(6);
    EXPECT_EQ(check_monotone(h, rng, 1000), 0u);
  }
}

TEST(ExtendRestriction, ReproducesMin) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<DataPoint> p;
    for (const Point& u : sample_points(2, 5, trial)) p.emplace_back(u, std::min(u[0], u[1]));
    for (int t = 1; t <= 2; ++t) {
      QFunction h = extend_restriction(p, t, 2);
      for (const auto& [u, v] : p) EXPECT_EQ(h(u), v);
      EXPECT_EQ(check_monotone(h, rng, 1000), 0u);
    }
  }
}

TEST(ExtendRestriction, InconsistentDataIsRejected) {
  std::vector<DataPoint> p{{{0, 0}, 3}, {{1, 1}, 3}};
  EXPECT_THROW(extend_restriction(p, 1, 2), ConsistencyError);
  EXPECT_THROW(extend_restriction({}, 3, 2), InputError);
  QFunction free = extend_restriction({}, 2, 2);
  EXPECT_EQ(xi(free), 2);
}

TEST(Uniqueness, WitnessRangeAndDependence) {
  QFunction f = make_member(2, 1, 0, PLMap::identity());
  UniquenessReport r = uniqueness_witnesses(f);
  EXPECT_TRUE(r.range_above_threshold);
  EXPECT_TRUE(r.depends_only_on_coordinate);
  EXPECT_EQ(r.grid_points, 100u);
  ASSERT_EQ(r.witnesses.size(), 2u);
  const QFunction& g = r.witnesses[0];
  EXPECT_EQ(g({0}), 1);
  EXPECT_EQ(g({3}), 4);
  EXPECT_EQ(g({-1}), Rational(1, 2));
  EXPECT_EQ(g({-3}), Rational(1, 4));
  // symbolic range bound: the infimum of the map is a itself, never attained
  EXPECT_EQ(uniqueness_map(0).infimum(), Extended::finite(0));
  EXPECT_EQ(uniqueness_map(Rational(5, 2)).infimum(), Extended::finite(Rational(5, 2)));

  QFunction unary = make_member(1, 1, 2, PLMap::translation(1));
  UniquenessReport u = uniqueness_witnesses(unary);
  EXPECT_TRUE(u.depends_only_on_coordinate);
  EXPECT_EQ(u.grid_points, 10u);
  for (int x = -10; x <= 10; ++x) EXPECT_GT(u.witnesses[0]({x}), 2);
}

TEST(Uniqueness, RequiresPrimitive) {
  QFunction f = make_member(1, 1, 0, PLMap::identity());
  EXPECT_THROW(uniqueness_witnesses(compose_members(f, {f})), InputError);
}

TEST(Noncontinuity, ExtensionsWithEveryCoordinate) {
  for (int n = 2; n <= 4; ++n) {
    for (int samples : {0, 1, 5}) {
      NoncontinuityReport r = noncontinuity_demo(n, samples, 0);
      EXPECT_EQ(r.restriction.size(), static_cast<std::size_t>(samples));
      ASSERT_EQ(r.extensions.size(), static_cast<std::size_t>(n));
      for (int t = 1; t <= n; ++t) {
        EXPECT_EQ(r.xi_values[t - 1], t);
        for (const auto& [u, v] : r.restriction) EXPECT_EQ(r.extensions[t - 1](u), v);
      }
      EXPECT_TRUE(r.agree_on_restriction);
    }
  }
  EXPECT_THROW(noncontinuity_demo(1, 5), InputError);
}

TEST(Noncontinuity, SeededSamplesAreReproducible) {
  EXPECT_EQ(sample_points(3, 10, 42), sample_points(3, 10, 42));
  EXPECT_NE(sample_points(3, 10, 42), sample_points(3, 10, 43));
}
