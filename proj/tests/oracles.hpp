#pragma once

// Independent brute-force reference implementations. None of these reuse the library's
// search routines; they work from the definitions directly.

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "clonebench/clonebench.hpp"

namespace oracle {

using clonebench::FiniteStructure;
using clonebench::Rational;
using clonebench::Relation;
using clonebench::TableOp;
using clonebench::Tuple;

// All maps {0..k-1} -> {0..k-1} as digit vectors.
inline std::vector<std::vector<int>> all_maps(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> f(k, 0);
  while (true) {
    out.push_back(f);
    int pos = k - 1;
    while (pos >= 0 && ++f[pos] == k) f[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

// Weak orders on k points: maps onto an initial segment {0..r-1}.
inline std::size_t count_weak_orders(int k) {
  std::size_t n = 0;
  for (const auto& f : all_maps(k)) {
    std::set<int> image(f.begin(), f.end());
    if (*image.rbegin() + 1 == static_cast<int>(image.size())) ++n;
  }
  return n;
}

// Set partitions of k points: kernels of maps, deduplicated.
inline std::size_t count_partitions(int k) {
  std::set<std::set<std::set<int>>> parts;
  for (const auto& f : all_maps(k)) {
    std::map<int, std::set<int>> blocks;
    for (int i = 0; i < k; ++i) blocks[f[i]].insert(i);
    std::set<std::set<int>> p;
    for (auto& [v, b] : blocks) p.insert(b);
    parts.insert(p);
  }
  return parts.size();
}

// Automorphisms by trying every permutation.
inline std::vector<std::vector<int>> brute_automorphisms(const FiniteStructure& s) {
  std::vector<int> p(s.domain_size());
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    bool ok = true;
    for (const Relation& r : s.relations()) {
      for (const Tuple& t : r.tuples) {
        Tuple img;
        for (int x : t) img.push_back(p[x]);
        if (!r.tuples.count(img)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Orbit partition of k-tuples: each class is the closure of a tuple under the group.
inline std::set<std::set<Tuple>> orbit_partition(const FiniteStructure& s, int k,
                                                 const std::vector<std::vector<int>>& group) {
  std::set<Tuple> seen;
  std::set<std::set<Tuple>> classes;
  std::vector<int> digits(k, 0);
  const int n = s.domain_size();
  while (true) {
    if (!seen.count(digits)) {
      std::set<Tuple> orbit;
      for (const auto& g : group) {
        Tuple img;
        for (int x : digits) img.push_back(g[x]);
        orbit.insert(img);
      }
      seen.insert(orbit.begin(), orbit.end());
      classes.insert(orbit);
    }
    int pos = k - 1;
    while (pos >= 0 && ++digits[pos] == n) digits[pos--] = 0;
    if (pos < 0) break;
  }
  return classes;
}

inline std::set<std::set<Tuple>> partition_of(const clonebench::OrbitSpace& space) {
  std::map<int, std::set<Tuple>> by_id;
  for (std::uint64_t code = 0; code < space.index().size(); ++code)
    by_id[space.index()[code]].insert(space.decode(code));
  std::set<std::set<Tuple>> out;
  for (auto& [id, c] : by_id) out.insert(c);
  return out;
}

inline FiniteStructure graph(int n, const std::vector<std::pair<int, int>>& edges, bool symmetric) {
  Relation r{"E", 2, {}};
  for (auto [a, b] : edges) {
    r.tuples.insert({a, b});
    if (symmetric) r.tuples.insert({b, a});
  }
  return FiniteStructure(n, {r});
}

struct NamedStructure {
  std::string name;
  FiniteStructure structure;
};

// Ten small structures with varied automorphism groups.
inline std::vector<NamedStructure> corpus() {
  std::vector<NamedStructure> c;
  c.push_back({"directed 3-cycle", graph(3, {{0, 1}, {1, 2}, {2, 0}}, false)});
  c.push_back({"path P4", graph(4, {{0, 1}, {1, 2}, {2, 3}}, true)});
  c.push_back({"K23", graph(5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}}, true)});
  std::vector<std::pair<int, int>> petersen;
  for (int i = 0; i < 5; ++i) {
    petersen.push_back({i, (i + 1) % 5});
    petersen.push_back({i, i + 5});
    petersen.push_back({i + 5, (i + 2) % 5 + 5});
  }
  c.push_back({"Petersen", graph(10, petersen, true)});
  c.push_back({"empty 3", FiniteStructure(3, {})});
  c.push_back({"linear order 3", graph(3, {{0, 1}, {0, 2}, {1, 2}}, false)});
  c.push_back({"4-cycle", graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, true)});
  Relation cyc{"C", 3, {}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        // cyclic order on 4 points: (i, j, k) in clockwise position
        int a = (j - i + 4) % 4, b = (k - i + 4) % 4;
        if (a != 0 && b != 0 && a < b) cyc.tuples.insert({i, j, k});
      }
  c.push_back({"cyclic order 4", FiniteStructure(4, {cyc})});
  c.push_back({"star K13", graph(4, {{0, 1}, {0, 2}, {0, 3}}, true)});
  Relation red{"R", 1, {{0}, {1}}};
  Relation e{"E", 2, {{0, 2}, {2, 0}, {1, 3}, {3, 1}}};
  c.push_back({"two coloured edges plus a point", FiniteStructure(5, {red, e})});
  return c;
}

// Canonicity from the definition: for every argument list and every choice of one
// automorphism per argument, the image orbit must not change.
inline bool is_canonical_by_definition(const TableOp& f, const FiniteStructure& s, int k) {
  auto group = brute_automorphisms(s);
  auto space = clonebench::orbits(s, k);
  const std::size_t group_size = group.size();
  const int n = f.arity;
  const std::size_t tuples = space.index().size();
  std::vector<std::size_t> codes(n, 0);
  auto image = [&](const std::vector<Tuple>& args) {
    Tuple out(k);
    for (int c = 0; c < k; ++c) {
      Tuple col;
      for (const Tuple& a : args) col.push_back(a[c]);
      out[c] = f(col);
    }
    return out;
  };
  auto same_orbit = [&](const Tuple& a, const Tuple& b) {
    for (const auto& g : group) {
      Tuple img;
      for (int x : a) img.push_back(g[x]);
      if (img == b) return true;
    }
    return false;
  };
  while (true) {
    std::vector<Tuple> args;
    for (int i = 0; i < n; ++i) args.push_back(space.decode(codes[i]));
    Tuple base = image(args);
    std::vector<std::size_t> choice(n, 0);
    while (true) {
      std::vector<Tuple> moved;
      for (int i = 0; i < n; ++i) {
        Tuple t;
        for (int x : args[i]) t.push_back(group[choice[i]][x]);
        moved.push_back(t);
      }
      if (!same_orbit(base, image(moved))) return false;
      int pos = n - 1;
      while (pos >= 0 && ++choice[pos] == group_size) choice[pos--] = 0;
      if (pos < 0) break;
    }
    int pos = n - 1;
    while (pos >= 0 && ++codes[pos] == tuples) codes[pos--] = 0;
    if (pos < 0) break;
  }
  return true;
}

// Closure of the selectors of one arity under the generators by naive fixpoint.
inline std::set<std::vector<int>> closure(int base, int arity, const std::vector<TableOp>& gens) {
  std::set<std::vector<int>> ops;
  for (int i = 0; i < arity; ++i) ops.insert(TableOp::selector(arity, i, base).values);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::vector<int>> current(ops.begin(), ops.end());
    for (const TableOp& g : gens) {
      std::vector<std::size_t> pick(g.arity, 0);
      while (true) {
        std::vector<int> out(current.front().size());
        for (std::size_t x = 0; x < out.size(); ++x) {
          Tuple in;
          for (std::size_t p : pick) in.push_back(current[p][x]);
          out[x] = g(in);
        }
        if (ops.insert(out).second) grew = true;
        int pos = g.arity - 1;
        while (pos >= 0 && ++pick[pos] == current.size()) pick[pos--] = 0;
        if (pos < 0) break;
      }
    }
  }
  return ops;
}

// Truth tables of a term over {0,1} when each symbol is a selector given by sigma.
inline std::vector<int> truth_table(const clonebench::Term& t, int n, const std::map<std::string, int>& sigma) {
  std::vector<int> out;
  for (int x = 0; x < (1 << n); ++x) {
    std::vector<int> input(n);
    for (int i = 0; i < n; ++i) input[i] = (x >> (n - 1 - i)) & 1;
    std::function<int(const clonebench::Term&)> eval = [&](const clonebench::Term& s) -> int {
      if (s.is_variable()) return input[s.index()];
      std::vector<int> args;
      for (const auto& a : s.args()) args.push_back(eval(a));
      return args[sigma.at(s.symbol())];
    };
    out.push_back(eval(t));
  }
  return out;
}

// Satisfiable in projections, decided by comparing truth tables on {0,1}.
inline bool satisfiable_by_truth_tables(const clonebench::EquationSystem& sys) {
  std::vector<int> coords(sys.signature.size(), 0);
  while (true) {
    std::map<std::string, int> sigma;
    for (std::size_t i = 0; i < coords.size(); ++i) sigma[sys.signature[i].first] = coords[i];
    bool ok = true;
    for (const auto& e : sys.equations)
      ok = ok && truth_table(e.lhs, sys.arity, sigma) == truth_table(e.rhs, sys.arity, sigma);
    if (ok) return true;
    int pos = static_cast<int>(coords.size()) - 1;
    while (pos >= 0 && ++coords[pos] == sys.signature[pos].second) coords[pos--] = 0;
    if (pos < 0) return false;
  }
}

// Order terms over integers with an exact lexicographic embedding: lex(a, b) is
// a * (2B + 1) + b, where B bounds |b| over the inputs. Returns the value and bound.
struct Bounded {
  clonebench::Integer value;
  clonebench::Integer bound;
};

inline std::vector<Bounded> eval_integer(const clonebench::OrderTerm& t,
                                         const std::vector<std::vector<clonebench::Integer>>& args,
                                         const clonebench::Integer& input_bound) {
  using K = clonebench::OrderTerm::Kind;
  std::vector<Bounded> out;
  switch (t.kind()) {
    case K::Var:
      for (const auto& v : args[t.index()]) out.push_back({v, input_bound});
      return out;
    case K::Min:
    case K::Max:
    case K::Lex: {
      auto a = eval_integer(t.children()[0], args, input_bound);
      auto b = eval_integer(t.children()[1], args, input_bound);
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (t.kind() == K::Min) {
          out.push_back({std::min(a[i].value, b[i].value), std::max(a[i].bound, b[i].bound)});
        } else if (t.kind() == K::Max) {
          out.push_back({std::max(a[i].value, b[i].value), std::max(a[i].bound, b[i].bound)});
        } else {
          clonebench::Integer m = 2 * b[i].bound + 1;
          out.push_back({a[i].value * m + b[i].value, a[i].bound * m + b[i].bound});
        }
      }
      return out;
    }
    case K::Map:
      break;
  }
  throw std::runtime_error("integer oracle handles min, max and lex only");
}

}  // namespace oracle
