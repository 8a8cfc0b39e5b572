#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "clonebench/clones.hpp"
#include "clonebench/error.hpp"
#include "clonebench/finite_structure.hpp"
#include "clonebench/operation.hpp"
#include "clonebench/order_term.hpp"
#include "clonebench/symbolic_structure.hpp"
#include "clonebench/table_op.hpp"

namespace clonebench {

struct CanonicalCaps {
  std::uint64_t max_argument_lists = 2'000'000;  // finite case: (domain^k)^n
  int max_joint_indices = 8;                      // symbolic case: n*k
  StructureCaps structure;
};

inline int default_k_max(int type_arity) { return std::max(type_arity, 3); }

struct FiniteCounterexample {
  int k = 0;
  std::vector<Tuple> args;        // a_1..a_n
  std::vector<Permutation> alphas;  // alpha_i(a_i) = other_args[i]
  std::vector<Tuple> other_args;
  int image_type = 0, other_image_type = 0;
};

struct FiniteVerdict {
  bool canonical = true;
  std::optional<FiniteCounterexample> counterexample;
};

struct SymbolicCounterexample {
  int k = 0;
  std::vector<Column> args, other_args;  // per argument, a k-tuple
  Pattern image, other_image;
};

struct SymbolicVerdict {
  bool canonical = true;
  std::optional<SymbolicCounterexample> counterexample;
};

class NotCanonical : public InputError {
 public:
  using InputError::InputError;
};

namespace detail {

inline Tuple apply_componentwise(const TableOp& f, const std::vector<Tuple>& args, int k) {
  Tuple out(k);
  Tuple column(args.size());
  for (int c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < args.size(); ++i) column[i] = args[i][c];
    out[c] = f(column);
  }
  return out;
}

}  // namespace detail

/// Exhaustive check over all argument lists: f is canonical up to k_max iff the orbit of
/// the componentwise image depends only on the orbits of the arguments.
inline FiniteVerdict is_canonical_finite(const TableOp& f, const FiniteStructure& s, int k_max,
                                         const CanonicalCaps& caps = {}) {
  if (f.base != s.domain_size()) throw InputError("operation is not defined on the structure's domain");
  if (k_max < 1) throw InputError("k_max must be at least 1");
  const auto group = automorphisms(s);
  const int n = f.arity;
  for (int k = 1; k <= k_max; ++k) {
    OrbitSpace space = orbits(s, k, group, caps.structure);
    const std::uint64_t tuples = space.index().size();
    if (checked_power(tuples, n, caps.max_argument_lists) > caps.max_argument_lists)
      throw CapExceeded("argument lists exceed cap " + std::to_string(caps.max_argument_lists));
    const std::uint64_t keys = checked_power(space.size(), n, caps.max_argument_lists);
    std::vector<int> first_image(keys, -1);
    std::vector<std::vector<std::uint64_t>> first_args(keys);

    std::vector<std::uint64_t> codes(n, 0);
    std::vector<Tuple> args(n);
    while (true) {
      std::uint64_t key = 0;
      for (int i = 0; i < n; ++i) {
        args[i] = space.decode(codes[i]);
        key = key * space.size() + space.index()[codes[i]];
      }
      int image = space.classify(detail::apply_componentwise(f, args, k));
      if (first_image[key] == -1) {
        first_image[key] = image;
        first_args[key] = codes;
      } else if (first_image[key] != image) {
        FiniteCounterexample cx;
        cx.k = k;
        for (int i = 0; i < n; ++i) {
          cx.args.push_back(space.decode(first_args[key][i]));
          cx.other_args.push_back(args[i]);
          for (const Permutation& g : group) {
            if (g.apply(cx.args.back()) == args[i]) {
              cx.alphas.push_back(g);
              break;
            }
          }
        }
        cx.image_type = first_image[key];
        cx.other_image_type = image;
        return {false, std::move(cx)};
      }
      int pos = n - 1;
      while (pos >= 0 && ++codes[pos] == tuples) codes[pos--] = 0;
      if (pos < 0) break;
    }
  }
  return {true, std::nullopt};
}

/// Exact check for pattern-determined order terms: every joint pattern of the n
/// argument k-tuples (a weak order on n*k indices) is realized once, and the output
/// pattern must agree across joint patterns with the same per-argument patterns.
inline SymbolicVerdict is_canonical_symbolic(const OrderTerm& f, int arity, const SymbolicStructure& s, int k_max,
                                             const CanonicalCaps& caps = {}) {
  if (!is_pattern_determined(f))
    throw InputError("order term " + f.to_string() + " compares values of different sorts");
  if (k_max < 1) throw InputError("k_max must be at least 1");
  if (f.max_variable() >= arity) throw InputError("order term uses a variable beyond its arity");
  LexRealization lex;
  for (int k = 1; k <= k_max; ++k) {
    const int joint = arity * k;
    if (joint > caps.max_joint_indices)
      throw CapExceeded("joint pattern size " + std::to_string(joint) + " exceeds cap " +
                        std::to_string(caps.max_joint_indices));
    // All joint patterns are evaluated in one batch of columns.
    std::vector<std::vector<int>> orders;
    for_each_weak_order(joint, [&](const std::vector<int>& r) { orders.push_back(r); });
    std::vector<Column> args(arity);
    for (const auto& r : orders)
      for (int i = 0; i < arity; ++i)
        for (int c = 0; c < k; ++c) args[i].push_back(Rational(r[i * k + c]));
    Column out = evaluate(f, args, lex);

    std::map<std::vector<std::vector<int>>, std::size_t> seen;
    auto slice = [&](const Column& col, std::size_t o) {
      return Column(col.begin() + static_cast<std::ptrdiff_t>(o * k),
                    col.begin() + static_cast<std::ptrdiff_t>((o + 1) * k));
    };
    for (std::size_t o = 0; o < orders.size(); ++o) {
      std::vector<std::vector<int>> key;
      for (int i = 0; i < arity; ++i) key.push_back(pattern_of(s.kind, slice(args[i], o)).code);
      auto [it, inserted] = seen.emplace(std::move(key), o);
      if (inserted) continue;
      const std::size_t p = it->second;
      Pattern here = pattern_of(s.kind, slice(out, o));
      Pattern there = pattern_of(s.kind, slice(out, p));
      if (here != there) {
        SymbolicCounterexample cx;
        cx.k = k;
        for (int i = 0; i < arity; ++i) {
          cx.args.push_back(slice(args[i], p));
          cx.other_args.push_back(slice(args[i], o));
        }
        cx.image = there;
        cx.other_image = here;
        return {false, std::move(cx)};
      }
    }
  }
  return {true, std::nullopt};
}

inline SymbolicVerdict is_canonical_symbolic(const Operation& f, const SymbolicStructure& s, int k_max,
                                             const CanonicalCaps& caps = {}) {
  if (f.is_table()) throw InputError("operation " + f.name + " is a table, not an order term");
  return is_canonical_symbolic(f.as_term(), f.arity, s, k_max, caps);
}

/// xi_k(f): an operation on the k-types.
struct TypeOperation {
  std::string name;
  int k = 1;
  TableOp table;
};

inline std::string describe(const SymbolicCounterexample& cx, SymbolicKind kind) {
  std::ostringstream os;
  auto tuple = [](const Column& c) {
    std::string s = "(";
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + to_string(c[i]);
    return s + ")";
  };
  os << "k=" << cx.k << ": args";
  for (const auto& a : cx.args) os << ' ' << tuple(a);
  os << " give " << cx.image.to_string() << " but args";
  for (const auto& a : cx.other_args) os << ' ' << tuple(a);
  os << " give " << cx.other_image.to_string() << " (argument patterns";
  for (const auto& a : cx.args) os << ' ' << pattern_of(kind, a).to_string();
  os << ')';
  return os.str();
}

inline std::string describe(const FiniteCounterexample& cx) {
  std::ostringstream os;
  auto tuple = [](const Tuple& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
    return s + ")";
  };
  os << "k=" << cx.k << ": args";
  for (const auto& a : cx.args) os << ' ' << tuple(a);
  os << " -> orbit " << cx.image_type << ", args";
  for (const auto& a : cx.other_args) os << ' ' << tuple(a);
  os << " -> orbit " << cx.other_image_type;
  return os.str();
}

/// xi_k(f) evaluated on caller-chosen representatives. representative(type, i) must
/// return a member of the type for argument position i.
inline TableOp type_table_with(const OrderTerm& f, int arity, const PatternSpace& space,
                               const std::function<Column(int, int)>& representative) {
  const int k = space.k();
  const std::size_t combos = TableOp::table_size(arity, space.size());
  std::vector<Column> args(arity);
  for (std::size_t x = 0; x < combos; ++x) {
    std::size_t rest = x;
    std::vector<int> types(arity);
    for (int i = arity - 1; i >= 0; --i) {
      types[i] = static_cast<int>(rest % space.size());
      rest /= space.size();
    }
    for (int i = 0; i < arity; ++i) {
      Column rep = representative(types[i], i);
      args[i].insert(args[i].end(), rep.begin(), rep.end());
    }
  }
  LexRealization lex;
  Column out = evaluate(f, args, lex);
  TableOp table{arity, space.size(), std::vector<int>(combos)};
  for (std::size_t x = 0; x < combos; ++x) {
    Column chunk(out.begin() + static_cast<std::ptrdiff_t>(x * k),
                 out.begin() + static_cast<std::ptrdiff_t>((x + 1) * k));
    table.values[x] = space.classify(chunk);
  }
  return table;
}

inline TypeOperation type_image(const Operation& f, const SymbolicStructure& s, const PatternSpace& space,
                                const CanonicalCaps& caps = {}, bool check = true) {
  if (f.is_table()) throw InputError("operation " + f.name + " is a table, not an order term");
  if (check) {
    SymbolicVerdict v = is_canonical_symbolic(f, s, space.k(), caps);
    if (!v.canonical)
      throw NotCanonical("operation " + f.name + " is not canonical: " + describe(*v.counterexample, s.kind));
  }
  TableOp t = type_table_with(f.as_term(), f.arity, space, [&](int type, int) { return space.representative(type); });
  return {f.name, space.k(), std::move(t)};
}

inline TypeOperation type_image(const Operation& f, const SymbolicStructure& s, int k,
                                const CanonicalCaps& caps = {}, bool check = true) {
  return type_image(f, s, enumerate_patterns(s, k, caps.structure), caps, check);
}

inline TypeOperation type_image(const Operation& f, const FiniteStructure& s, const OrbitSpace& space,
                                const CanonicalCaps& caps = {}, bool check = true) {
  if (!f.is_table()) throw InputError("operation " + f.name + " is not a table");
  const TableOp& op = f.as_table();
  if (check) {
    FiniteVerdict v = is_canonical_finite(op, s, space.k(), caps);
    if (!v.canonical) throw NotCanonical("operation " + f.name + " is not canonical: " + describe(*v.counterexample));
  }
  TableOp table = TableOp::from_function(op.arity, space.size(), [&](const Tuple& types) {
    std::vector<Tuple> args;
    for (int t : types) args.push_back(space.representative(t));
    return space.classify(detail::apply_componentwise(op, args, space.k()));
  });
  return {f.name, space.k(), std::move(table)};
}

inline TypeOperation type_image(const Operation& f, const FiniteStructure& s, int k, const CanonicalCaps& caps = {},
                                bool check = true) {
  return type_image(f, s, orbits(s, k, caps.structure), caps, check);
}

inline std::vector<Generator> as_generators(const std::vector<TypeOperation>& ops) {
  std::vector<Generator> out;
  for (const TypeOperation& t : ops) out.push_back({t.name, t.table});
  return out;
}

/// Images of the generators on the m-types, m the structure's type arity.
inline std::vector<TypeOperation> xi_infty(const std::vector<Operation>& generators, const SymbolicStructure& s,
                                           const CanonicalCaps& caps = {}) {
  PatternSpace space = enumerate_patterns(s, s.type_arity(), caps.structure);
  std::vector<TypeOperation> out;
  for (const Operation& g : generators) {
    SymbolicVerdict v = is_canonical_symbolic(g, s, default_k_max(s.type_arity()), caps);
    if (!v.canonical)
      throw NotCanonical("operation " + g.name + " is not canonical: " + describe(*v.counterexample, s.kind));
    out.push_back(type_image(g, s, space, caps, false));
  }
  return out;
}

inline std::vector<TypeOperation> xi_infty(const std::vector<Operation>& generators, const FiniteStructure& s,
                                           const CanonicalCaps& caps = {}) {
  OrbitSpace space = orbits(s, s.type_arity(), caps.structure);
  std::vector<TypeOperation> out;
  for (const Operation& g : generators) out.push_back(type_image(g, s, space, caps, true));
  return out;
}

/// Order term of a term over generator symbols, with each symbol replaced by its body.
inline OrderTerm instantiate(const Term& t, const std::map<std::string, Operation>& generators) {
  if (t.is_variable()) return OrderTerm::var(t.index());
  auto it = generators.find(t.symbol());
  if (it == generators.end()) throw InputError("unknown generator " + t.symbol());
  const Operation& g = it->second;
  if (g.is_table()) throw InputError("generator " + g.name + " is not an order term");
  if (g.arity != static_cast<int>(t.args().size()))
    throw InputError("generator " + g.name + " applied with wrong arity");
  std::vector<OrderTerm> args;
  for (const Term& a : t.args()) args.push_back(instantiate(a, generators));
  return substitute(g.as_term(), args);
}

struct FactorReport {
  bool consistent = true;
  std::vector<std::string> violations;
  std::size_t entries_checked = 0;
  std::size_t collisions_checked = 0;
  std::size_t restrictions_checked = 0;
  bool saturated = false;
};

/// Checks that xi_{k'}(f) -> xi_k(f) is a well-defined injective map on the generated
/// clone (up to caps), and that each xi_k(f) is the restriction of xi_{k'}(f) to the
/// first k coordinates.
template <class Space>
FactorReport check_factor_consistency(const std::vector<Generator>& images_k, const Space& space_k,
                                      const std::vector<Generator>& images_k2, const Space& space_k2,
                                      const CloneCaps& clone_caps = {}) {
  if (images_k.size() != images_k2.size()) throw InputError("generator lists differ in length");
  FactorReport report;
  auto violation = [&](std::string what) {
    report.consistent = false;
    report.violations.push_back(std::move(what));
  };

  std::vector<int> first_k(space_k.k());
  for (int i = 0; i < space_k.k(); ++i) first_k[i] = i;
  for (std::size_t g = 0; g < images_k.size(); ++g) {
    const TableOp& small = images_k[g].table;
    const TableOp& big = images_k2[g].table;
    if (images_k[g].name != images_k2[g].name || small.arity != big.arity)
      throw InputError("generator lists do not correspond");
    for (std::size_t x = 0; x < small.values.size(); ++x) {
      Tuple types = small.decode(x);
      Tuple lifted;
      for (int t : types) {
        auto rep = space_k.representative(t);
        while (static_cast<int>(rep.size()) < space_k2.k()) rep.push_back(rep.back());
        lifted.push_back(space_k2.classify(rep));
      }
      int restricted = type_restriction(space_k2, big(lifted), first_k, space_k);
      ++report.restrictions_checked;
      if (restricted != small.values[x])
        violation(images_k[g].name + ": k-table entry " + std::to_string(x) + " is " +
                  std::to_string(small.values[x]) + " but the restricted k'-table gives " + std::to_string(restricted));
    }
  }

  FiniteClone big_clone = generate(space_k2.size(), images_k2, clone_caps);
  auto lookup = [&](const std::string& name) -> const TableOp& {
    for (const Generator& g : images_k)
      if (g.name == name) return g.table;
    throw InputError("no generator named " + name);
  };
  for (int l = 1; l <= big_clone.max_arity(); ++l) {
    std::vector<TableOp> small_tables;
    std::unordered_map<TableOp, int, TableOpHash> seen;
    const auto& cat = big_clone.catalog(l);
    for (std::size_t e = 0; e < cat.size(); ++e) {
      TableOp t = evaluate_term(cat[e].witness, l, space_k.size(), lookup);
      ++report.entries_checked;
      auto [it, inserted] = seen.emplace(t, static_cast<int>(e));
      if (!inserted)
        violation("not injective: " + cat[it->second].witness.to_string() + " and " + cat[e].witness.to_string() +
                  " differ on k'-types but agree on k-types");
      small_tables.push_back(std::move(t));
    }
    for (const Collision& c : big_clone.collisions(l)) {
      Term term = big_clone.term_of(c, l);
      TableOp t = evaluate_term(term, l, space_k.size(), lookup);
      ++report.collisions_checked;
      if (t != small_tables[c.entry])
        violation("not well-defined: " + term.to_string() + " and " + cat[c.entry].witness.to_string() +
                  " agree on k'-types but differ on k-types");
    }
  }
  report.saturated = big_clone.fully_saturated();
  return report;
}

inline FactorReport check_factor_isomorphism(const std::vector<Operation>& generators, const SymbolicStructure& s,
                                             int k, int k2, const CanonicalCaps& caps = {},
                                             const CloneCaps& clone_caps = {}) {
  if (!(s.type_arity() <= k && k < k2)) throw InputError("need m <= k < k'");
  PatternSpace small = enumerate_patterns(s, k, caps.structure);
  PatternSpace big = enumerate_patterns(s, k2, caps.structure);
  std::vector<TypeOperation> images_k, images_k2;
  for (const Operation& g : generators) {
    images_k2.push_back(type_image(g, s, big, caps, true));
    images_k.push_back(type_image(g, s, small, caps, false));
  }
  return check_factor_consistency(as_generators(images_k), small, as_generators(images_k2), big, clone_caps);
}

inline FactorReport check_factor_isomorphism(const std::vector<Operation>& generators, const FiniteStructure& s,
                                             int k, int k2, const CanonicalCaps& caps = {},
                                             const CloneCaps& clone_caps = {}) {
  if (!(s.type_arity() <= k && k < k2)) throw InputError("need m <= k < k'");
  auto group = automorphisms(s);
  OrbitSpace small = orbits(s, k, group, caps.structure);
  OrbitSpace big = orbits(s, k2, group, caps.structure);
  std::vector<TypeOperation> images_k, images_k2;
  for (const Operation& g : generators) {
    images_k2.push_back(type_image(g, s, big, caps, true));
    images_k.push_back(type_image(g, s, small, caps, false));
  }
  return check_factor_consistency(as_generators(images_k), small, as_generators(images_k2), big, clone_caps);
}

}  // namespace clonebench
