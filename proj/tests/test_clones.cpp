#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace clonebench;

namespace {

TableOp min2() { return TableOp::from_function(2, 2, [](const Tuple& a) { return std::min(a[0], a[1]); }); }

TableOp majority() {
  return TableOp::from_function(3, 2, [](const Tuple& a) { return a[0] + a[1] + a[2] >= 2 ? 1 : 0; });
}

TableOp add3() { return TableOp::from_function(2, 3, [](const Tuple& a) { return (a[0] + a[1]) % 3; }); }

TableOp lex_type_table() {
  auto dlo = SymbolicStructure::dlo();
  return type_image(Operation::term("lex", 2, parse_order_term("lex(x1,x2)")), dlo, 2).table;
}

struct Case {
  std::string name;
  int base;
  std::vector<Generator> gens;
  int arity;
};

std::vector<Case> cases() {
  return {{"min", 2, {{"min", min2()}}, 3},
          {"majority", 2, {{"m", majority()}}, 2},
          {"add mod 3", 3, {{"add", add3()}}, 2},
          {"lex types", 3, {{"lex", lex_type_table()}}, 2},
          {"selectors", 3, {}, 3}};
}

}  // namespace

TEST(Generate, CatalogEqualsNaiveClosure) {
  for (const Case& c : cases()) {
    CloneCaps caps;
    caps.max_arity = c.arity;
    caps.max_depth = 10;
    FiniteClone clone = generate(c.base, c.gens, caps);
    std::vector<TableOp> tables;
    for (const Generator& g : c.gens) tables.push_back(g.table);
    for (int l = 1; l <= c.arity; ++l) {
      ASSERT_TRUE(clone.saturated(l)) << c.name << " arity " << l;
      std::set<std::vector<int>> got;
      for (const CatalogEntry& e : clone.catalog(l)) got.insert(e.table.values);
      EXPECT_EQ(got, oracle::closure(c.base, l, tables)) << c.name << " arity " << l;
    }
  }
}

TEST(Generate, KnownCatalogSizes) {
  CloneCaps caps;
  caps.max_arity = 3;
  FiniteClone c = generate(2, std::vector<Generator>{{"min", min2()}}, caps);
  // the nonempty meets of the coordinates
  EXPECT_EQ(c.catalog(1).size(), 1u);
  EXPECT_EQ(c.catalog(2).size(), 3u);
  EXPECT_EQ(c.catalog(3).size(), 7u);
  FiniteClone sel = generate(3, std::vector<Generator>{}, caps);
  for (int l = 1; l <= 3; ++l) EXPECT_EQ(sel.catalog(l).size(), static_cast<std::size_t>(l));
  EXPECT_TRUE(sel.fully_saturated());
}

TEST(Generate, EveryWitnessReevaluatesToItsTable) {
  for (const Case& c : cases()) {
    CloneCaps caps;
    caps.max_arity = c.arity;
    FiniteClone clone = generate(c.base, c.gens, caps);
    for (int l = 1; l <= clone.max_arity(); ++l) {
      for (const CatalogEntry& e : clone.catalog(l)) EXPECT_EQ(evaluate_term(e.witness, l, clone), e.table);
      for (const Collision& col : clone.collisions(l))
        EXPECT_EQ(evaluate_term(clone.term_of(col, l), l, clone), clone.catalog(l)[col.entry].table);
    }
  }
}

TEST(Generate, SelectorLawsOnRandomCompositions) {
  std::mt19937_64 rng(1);
  for (const Case& c : cases()) {
    CloneCaps caps;
    caps.max_arity = c.arity;
    FiniteClone clone = generate(c.base, c.gens, caps);
    for (int l = 1; l <= clone.max_arity(); ++l) {
      const auto& cat = clone.catalog(l);
      std::uniform_int_distribution<std::size_t> pick(0, cat.size() - 1);
      for (int trial = 0; trial < 20; ++trial) {
        const TableOp& f = cat[pick(rng)].table;
        std::vector<TableOp> sels;
        for (int i = 0; i < l; ++i) sels.push_back(TableOp::selector(l, i, c.base));
        EXPECT_EQ(compose(f, sels), f);
        std::vector<TableOp> gs;
        for (int i = 0; i < l; ++i) gs.push_back(cat[pick(rng)].table);
        for (int i = 0; i < l; ++i) EXPECT_EQ(compose(TableOp::selector(l, i, c.base), gs), gs[i]);
        // closed under composition
        EXPECT_TRUE(clone.find(compose(f, gs)).has_value()) << c.name;
      }
    }
  }
}

TEST(Generate, MonotoneInCaps) {
  TableOp lex = lex_type_table();
  CloneCaps small;
  small.max_arity = 3;
  small.max_depth = 1;
  small.max_catalog = 10;
  FiniteClone a = generate(3, std::vector<Generator>{{"lex", lex}}, small);
  for (CloneCaps big : {CloneCaps{3, 2, 10, 200'000, 50'000'000}, CloneCaps{3, 1, 1000, 200'000, 50'000'000},
                        CloneCaps{4, 3, 1000, 200'000, 50'000'000}}) {
    FiniteClone b = generate(3, std::vector<Generator>{{"lex", lex}}, big);
    for (int l = 1; l <= a.max_arity(); ++l) {
      ASSERT_LE(a.catalog(l).size(), b.catalog(l).size());
      for (std::size_t i = 0; i < a.catalog(l).size(); ++i) {
        EXPECT_EQ(a.catalog(l)[i].table, b.catalog(l)[i].table);
        EXPECT_EQ(a.catalog(l)[i].witness, b.catalog(l)[i].witness);
      }
    }
  }
}

TEST(Generate, DepthCapLeavesArityUnsaturated) {
  CloneCaps caps;
  caps.max_arity = 4;
  caps.max_depth = 1;
  FiniteClone c = generate(3, std::vector<Generator>{{"lex", lex_type_table()}}, caps);
  EXPECT_FALSE(c.saturated(4));
  EXPECT_FALSE(c.fully_saturated());
}

TEST(Generate, CatalogCapDropsTables) {
  CloneCaps caps;
  caps.max_arity = 3;
  caps.max_catalog = 5;
  FiniteClone c = generate(3, std::vector<Generator>{{"lex", lex_type_table()}}, caps);
  EXPECT_EQ(c.catalog(3).size(), 5u);
  EXPECT_FALSE(c.saturated(3));
}

TEST(Generate, Deterministic) {
  CloneCaps caps;
  caps.max_arity = 3;
  std::vector<Generator> gens{{"lex", lex_type_table()}};
  EXPECT_EQ(dump(generate(3, gens, caps)), dump(generate(3, gens, caps)));
}

TEST(Generate, RejectsBadInput) {
  EXPECT_THROW(generate(0, std::vector<Generator>{}), InputError);
  EXPECT_THROW(generate(3, std::vector<Generator>{{"min", min2()}}), InputError);
  CloneCaps caps;
  caps.max_arity = 0;
  EXPECT_THROW(generate(2, std::vector<Generator>{{"min", min2()}}, caps), InputError);
}

TEST(Lookup, SelectorsGeneratorsAndNonMembers) {
  CloneCaps caps;
  caps.max_arity = 2;
  FiniteClone c = generate(2, std::vector<Generator>{{"min", min2()}}, caps);
  EXPECT_EQ(c.lookup_by_table(TableOp::selector(2, 1, 2))->to_string(), "x2");
  EXPECT_EQ(c.lookup_by_table(min2())->to_string(), "min(x1,x2)");
  TableOp max2 = TableOp::from_function(2, 2, [](const Tuple& a) { return std::max(a[0], a[1]); });
  EXPECT_FALSE(c.lookup_by_table(max2));
  EXPECT_FALSE(c.lookup_by_table(TableOp::selector(3, 0, 2)));
}

TEST(Dump, OneLinePerEntry) {
  CloneCaps caps;
  caps.max_arity = 2;
  std::string d = dump(generate(2, std::vector<Generator>{{"min", min2()}}, caps));
  EXPECT_EQ(d,
            "arity 1 table 0 1 term x1\n"
            "arity 2 table 0 0 1 1 term x1\n"
            "arity 2 table 0 1 0 1 term x2\n"
            "arity 2 table 0 0 0 1 term min(x1,x2)\n");
}

TEST(Collisions, ObserverSeesEveryCollisionPastTheCap) {
  CloneCaps caps;
  caps.max_arity = 3;
  caps.max_collisions = 3;
  std::vector<std::size_t> seen(4, 0);
  FiniteClone c = generate(2, std::vector<Generator>{{"min", min2()}}, caps,
                           [&](int l, std::size_t, const Collision&, const std::vector<CatalogEntry>&) { ++seen[l]; });
  CloneCaps full = caps;
  full.max_collisions = 1'000'000;
  FiniteClone d = generate(2, std::vector<Generator>{{"min", min2()}}, full);
  for (int l = 1; l <= 3; ++l) {
    EXPECT_EQ(seen[l], d.collisions(l).size());
    EXPECT_LE(c.collisions(l).size(), 3u);
  }
  EXPECT_TRUE(c.collisions_truncated(3));
}
