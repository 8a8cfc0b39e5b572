#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clonebench/error.hpp"
#include "clonebench/table_op.hpp"
#include "clonebench/term.hpp"

namespace clonebench {

struct CloneCaps {
  int max_arity = 6;
  int max_depth = 4;
  std::size_t max_catalog = 100'000;      // tables per arity
  std::size_t max_collisions = 200'000;   // recorded equal-table pairs per arity
  std::uint64_t max_work = 50'000'000;    // compositions tried per arity
};

struct CatalogEntry {
  TableOp table;
  Term witness;
  int depth = 0;
};

/// generator(args...) produced the table of catalog entry `entry`, which already had
/// a different witness. generator == -1 marks two coinciding selectors; then
/// args = {selector index}.
struct Collision {
  int generator = -1;
  std::vector<int> args;
  int entry = 0;
};

struct Generator {
  std::string name;
  TableOp table;
};

/// Called for every collision in generation order, including those past the recording
/// cap. `sequence` counts collisions per arity; `catalog` is the catalog so far.
using CollisionObserver =
    std::function<void(int arity, std::size_t sequence, const Collision&, const std::vector<CatalogEntry>& catalog)>;

/// A finitely generated clone on {0..base-1}, explored by composition depth up to caps.
/// Each arity's catalog holds the distinct tables found, each with the first witness
/// term in the deterministic search order (depth, generator, argument indices).
class FiniteClone {
 public:
  int base() const { return base_; }
  const std::vector<Generator>& generators() const { return generators_; }
  const CloneCaps& caps() const { return caps_; }
  int max_arity() const { return static_cast<int>(catalogs_.size()); }

  const std::vector<CatalogEntry>& catalog(int arity) const { return catalogs_.at(check(arity)); }
  const std::vector<Collision>& collisions(int arity) const { return collisions_.at(check(arity)); }

  // The arity-l part reached a fixpoint: it is exactly the l-ary part of the clone.
  bool saturated(int arity) const { return saturated_.at(check(arity)); }
  bool collisions_truncated(int arity) const { return truncated_.at(check(arity)); }

  bool fully_saturated() const {
    for (int l = 1; l <= max_arity(); ++l)
      if (!saturated(l) || collisions_truncated(l)) return false;
    return true;
  }

  std::optional<int> find(const TableOp& t) const {
    if (t.arity < 1 || t.arity > max_arity() || t.base != base_) return std::nullopt;
    const auto& idx = index_[t.arity - 1];
    auto it = idx.find(t);
    if (it == idx.end()) return std::nullopt;
    return it->second;
  }

  std::optional<Term> lookup_by_table(const TableOp& t) const {
    auto e = find(t);
    if (!e) return std::nullopt;
    return catalog(t.arity)[*e].witness;
  }

  Term term_of(const Collision& c, int arity) const {
    const auto& cat = catalog(arity);
    if (c.generator < 0) return Term::variable(c.args.at(0));
    std::vector<Term> args;
    for (int a : c.args) args.push_back(cat[a].witness);
    return Term::apply(generators_[c.generator].name, std::move(args));
  }

  const TableOp& generator_table(const std::string& name) const {
    for (const Generator& g : generators_)
      if (g.name == name) return g.table;
    throw InputError("no generator named " + name);
  }

 private:
  std::size_t check(int arity) const {
    if (arity < 1 || arity > max_arity())
      throw InputError("arity " + std::to_string(arity) + " is outside the clone's arity cap");
    return static_cast<std::size_t>(arity - 1);
  }

  friend FiniteClone generate(int, std::vector<Generator>, const CloneCaps&, const CollisionObserver&);

  int base_ = 1;
  std::vector<Generator> generators_;
  CloneCaps caps_;
  std::vector<std::vector<CatalogEntry>> catalogs_;
  std::vector<std::unordered_map<TableOp, int, TableOpHash>> index_;
  std::vector<std::vector<Collision>> collisions_;
  std::vector<bool> saturated_;
  std::vector<bool> truncated_;
};

/// Breadth-first closure of the selectors under the generators, one arity at a time
/// (the l-ary part of a clone only involves l-ary operations). Step t composes each
/// generator with argument tuples that use at least one entry found at step t-1.
inline FiniteClone generate(int base, std::vector<Generator> generators, const CloneCaps& caps = {},
                            const CollisionObserver& observer = {}) {
  if (base < 1) throw InputError("base set must be nonempty");
  if (caps.max_arity < 1 || caps.max_depth < 0) throw InputError("clone caps must be positive");
  for (const Generator& g : generators) {
    if (!g.table.is_valid() || g.table.base != base)
      throw InputError("generator " + g.name + " does not live on the base set");
  }
  FiniteClone c;
  c.base_ = base;
  c.generators_ = std::move(generators);
  c.caps_ = caps;
  const int arities = caps.max_arity;
  c.catalogs_.resize(arities);
  c.index_.resize(arities);
  c.collisions_.resize(arities);
  c.saturated_.assign(arities, false);
  c.truncated_.assign(arities, false);

  for (int l = 1; l <= arities; ++l) {
    auto& entries = c.catalogs_[l - 1];
    auto& index = c.index_[l - 1];
    auto& collisions = c.collisions_[l - 1];
    std::size_t sequence = 0;
    auto record = [&](Collision col) {
      if (observer) observer(l, sequence, col, entries);
      ++sequence;
      if (collisions.size() < caps.max_collisions) {
        collisions.push_back(std::move(col));
      } else {
        c.truncated_[l - 1] = true;
      }
    };

    for (int i = 0; i < l; ++i) {
      TableOp sel = TableOp::selector(l, i, base);
      if (auto it = index.find(sel); it != index.end()) {
        record({-1, {i}, it->second});
      } else {
        index.emplace(sel, static_cast<int>(entries.size()));
        entries.push_back({std::move(sel), Term::variable(i), 0});
      }
    }

    std::size_t previous_begin = 0;
    std::uint64_t work = 0;
    bool out_of_budget = false;
    bool dropped = false;
    for (int depth = 1; depth <= caps.max_depth && !out_of_budget; ++depth) {
      const std::size_t current = entries.size();
      for (std::size_t gi = 0; gi < c.generators_.size() && !out_of_budget; ++gi) {
        const TableOp& g = c.generators_[gi].table;
        const int r = g.arity;
        std::vector<int> args(r, 0);
        std::vector<const int*> inputs_ptr(r);
        TableOp composed{l, base, std::vector<int>(entries.front().table.values.size())};
        while (true) {
          bool has_new = false;
          for (int a : args) has_new |= static_cast<std::size_t>(a) >= previous_begin;
          if (has_new) {
            if (++work > caps.max_work) {
              out_of_budget = true;
              break;
            }
            for (int j = 0; j < r; ++j) inputs_ptr[j] = entries[args[j]].table.values.data();
            const std::size_t size = composed.values.size();
            int* out = composed.values.data();
            if (r == 2) {
              const int *a = inputs_ptr[0], *b = inputs_ptr[1];
              for (std::size_t x = 0; x < size; ++x) out[x] = g.values[a[x] * base + b[x]];
            } else {
              for (std::size_t x = 0; x < size; ++x) {
                std::size_t idx = 0;
                for (int j = 0; j < r; ++j) idx = idx * base + inputs_ptr[j][x];
                out[x] = g.values[idx];
              }
            }
            if (auto it = index.find(composed); it != index.end()) {
              record({static_cast<int>(gi), args, it->second});
            } else if (entries.size() < caps.max_catalog) {
              std::vector<Term> children;
              for (int a : args) children.push_back(entries[a].witness);
              index.emplace(composed, static_cast<int>(entries.size()));
              entries.push_back({composed, Term::apply(c.generators_[gi].name, std::move(children)), depth});
            } else {
              dropped = true;
            }
          }
          int pos = r - 1;
          while (pos >= 0 && ++args[pos] == static_cast<int>(current)) args[pos--] = 0;
          if (pos < 0) break;
        }
      }
      if (out_of_budget) break;
      if (entries.size() == current && !dropped) {
        c.saturated_[l - 1] = true;
        break;
      }
      previous_begin = current;
    }
    if (c.generators_.empty()) c.saturated_[l - 1] = true;
  }
  return c;
}

inline FiniteClone generate(int base, const std::vector<std::pair<std::string, TableOp>>& generators,
                            const CloneCaps& caps = {}, const CollisionObserver& observer = {}) {
  std::vector<Generator> gens;
  for (const auto& [name, table] : generators) gens.push_back({name, table});
  return generate(base, std::move(gens), caps, observer);
}

using TableLookup = std::function<const TableOp&(const std::string&)>;

/// Table of t read as an operation of the given arity.
inline TableOp evaluate_term(const Term& t, int arity, int base, const TableLookup& lookup) {
  if (t.is_variable()) {
    if (t.index() >= arity) throw InputError("term variable exceeds arity");
    return TableOp::selector(arity, t.index(), base);
  }
  const TableOp& f = lookup(t.symbol());
  if (f.arity != static_cast<int>(t.args().size()))
    throw InputError("symbol " + t.symbol() + " applied with wrong arity");
  std::vector<TableOp> inner;
  for (const Term& a : t.args()) inner.push_back(evaluate_term(a, arity, base, lookup));
  return compose(f, inner);
}

inline TableOp evaluate_term(const Term& t, int arity, const FiniteClone& c) {
  return evaluate_term(t, arity, c.base(), [&](const std::string& s) -> const TableOp& {
    return c.generator_table(s);
  });
}

/// One line per catalog entry: `arity <n> table <row-major outputs> term <witness>`.
inline std::string dump(const FiniteClone& c) {
  std::ostringstream os;
  for (int l = 1; l <= c.max_arity(); ++l)
    for (const CatalogEntry& e : c.catalog(l))
      os << "arity " << l << " table " << e.table.to_string() << " term " << e.witness.to_string() << '\n';
  return os.str();
}

}  // namespace clonebench
