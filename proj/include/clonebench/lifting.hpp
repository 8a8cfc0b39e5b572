#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "clonebench/canonical.hpp"
#include "clonebench/clones.hpp"
#include "clonebench/equations.hpp"
#include "clonebench/error.hpp"
#include "clonebench/operation.hpp"
#include "clonebench/order_term.hpp"
#include "clonebench/rational.hpp"
#include "clonebench/symbolic_structure.hpp"

namespace clonebench {

struct LiftCaps {
  std::uint64_t max_columns = 1'000'000;  // |A|^n
};

/// n tuples of length |A|^n whose columns list A^n once, in lexicographic order.
inline std::vector<Column> enumerate_argument_matrix(const std::vector<Rational>& a, int n,
                                                     const LiftCaps& caps = {}) {
  if (a.empty()) throw InputError("the finite set A must be nonempty");
  if (n < 1) throw InputError("arity must be positive");
  std::vector<Rational> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const std::uint64_t columns = checked_power(sorted.size(), n, caps.max_columns);
  if (columns > caps.max_columns)
    throw CapExceeded("|A|^n exceeds cap " + std::to_string(caps.max_columns));
  std::vector<Column> u(n, Column(columns));
  for (std::uint64_t c = 0; c < columns; ++c) {
    std::uint64_t rest = c;
    for (int i = n - 1; i >= 0; --i) {
      u[i][c] = sorted[rest % sorted.size()];
      rest /= sorted.size();
    }
  }
  return u;
}

/// Automorphisms sending both value tuples onto the common rank tuple: ranks among the
/// distinct values for the dense order, first-occurrence labels for the pure set.
/// None when the two tuples have different patterns.
inline std::optional<std::pair<RationalAutomorphism, RationalAutomorphism>> find_equalizers(
    const Column& s_val, const Column& t_val, const SymbolicStructure& s) {
  if (s_val.size() != t_val.size()) return std::nullopt;
  Pattern p = pattern_of(s, s_val);
  if (p != pattern_of(s, t_val)) return std::nullopt;
  auto to_rank = [&](const Column& v) -> RationalAutomorphism {
    std::vector<std::pair<Rational, Rational>> points;
    for (std::size_t i = 0; i < v.size(); ++i) points.emplace_back(v[i], Rational(p.code[i]));
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (s.kind == SymbolicKind::DenseLinearOrder) return PLMap::interpolate(std::move(points));
    return FinitePermutation::extend(points);
  };
  return std::make_pair(to_rank(s_val), to_rank(t_val));
}

/// The data of the lifting construction: concrete canonical generators, a system
/// satisfied in their type clone by xi, and a lift xi' of xi to terms over the
/// generators, to be evaluated on the finite sets A_0, A_1, ...
struct LiftInstance {
  SymbolicStructure structure;
  std::vector<Operation> generators;
  EquationSystem sigma;
  std::map<std::string, TableOp> xi;     // symbol -> table on the m-types
  std::map<std::string, Term> xi_lift;   // symbol -> term over generator names
  std::vector<std::vector<Rational>> universes;

  std::map<std::string, Operation> generator_map() const {
    std::map<std::string, Operation> m;
    for (const Operation& g : generators) m.emplace(g.name, g);
    return m;
  }
};

/// A_j = {0, 1, ..., j} for j = 0..depth.
inline std::vector<std::vector<Rational>> default_universes(int depth) {
  if (depth < 0) throw InputError("lift depth must be nonnegative");
  std::vector<std::vector<Rational>> out;
  for (int j = 0; j <= depth; ++j) {
    std::vector<Rational> a;
    for (int x = 0; x <= j; ++x) a.emplace_back(x);
    out.push_back(std::move(a));
  }
  return out;
}

/// Builds the instance from an assignment found in the type clone: xi sends each symbol
/// to the chosen table and xi' to that table's witness term.
inline LiftInstance make_lift_instance(const SymbolicStructure& s, std::vector<Operation> generators,
                                       EquationSystem sigma, const Assignment& assignment, int depth) {
  LiftInstance inst{s, std::move(generators), pad_to_common_arity(std::move(sigma)), {}, {}, default_universes(depth)};
  for (const auto& [name, arity] : inst.sigma.signature) {
    auto op = assignment.operations.find(name);
    auto w = assignment.witnesses.find(name);
    if (op == assignment.operations.end() || w == assignment.witnesses.end())
      throw InputError("assignment misses symbol " + name);
    inst.xi.emplace(name, op->second);
    inst.xi_lift.emplace(name, w->second);
  }
  return inst;
}

/// xi sends each symbol to the type image of the generator with the same name and
/// arity, xi' to that generator applied to x1..xn. None if some symbol has no such
/// generator.
inline std::optional<Assignment> generator_assignment(const EquationSystem& sigma,
                                                      const std::vector<Operation>& generators,
                                                      const SymbolicStructure& s, const CanonicalCaps& caps = {}) {
  PatternSpace space = enumerate_patterns(s, s.type_arity(), caps.structure);
  Assignment a;
  for (const auto& [name, arity] : sigma.signature) {
    auto it = std::find_if(generators.begin(), generators.end(), [&](const Operation& g) { return g.name == name; });
    if (it == generators.end() || it->arity != arity) return std::nullopt;
    std::vector<Term> vars;
    for (int i = 0; i < arity; ++i) vars.push_back(Term::variable(i));
    a.operations.emplace(name, type_image(*it, s, space, caps, true).table);
    a.witnesses.emplace(name, Term::apply(name, std::move(vars)));
  }
  return a;
}

struct EquationWitness {
  RationalAutomorphism alpha_lhs;
  RationalAutomorphism alpha_rhs;
};

/// r_j: one pair of automorphisms per equation, certified on A^n.
struct WitnessTuple {
  int j = 0;
  std::vector<Rational> universe;
  std::vector<EquationWitness> maps;
  std::size_t columns_verified = 0;
};

class EqualizerFailure : public Error {
 public:
  EqualizerFailure(int j, int equation, Pattern lhs, Pattern rhs)
      : Error("equalizer failure at A_" + std::to_string(j) + ", equation " + std::to_string(equation + 1) +
              ": patterns " + lhs.to_string() + " and " + rhs.to_string() + " differ"),
        j_(j),
        equation_(equation),
        lhs_(std::move(lhs)),
        rhs_(std::move(rhs)) {}

  int j() const { return j_; }
  int equation() const { return equation_; }
  const Pattern& lhs_pattern() const { return lhs_; }
  const Pattern& rhs_pattern() const { return rhs_; }

 private:
  int j_, equation_;
  Pattern lhs_, rhs_;
};

struct LiftOptions {
  bool check_hypothesis = true;
  LiftCaps caps;
};

namespace detail {

// xi'(t): each symbol application becomes the order term of its lift.
inline OrderTerm lift_term(const Term& t, const LiftInstance& inst, const std::map<std::string, Operation>& gens) {
  if (t.is_variable()) return OrderTerm::var(t.index());
  std::vector<OrderTerm> args;
  for (const Term& a : t.args()) args.push_back(lift_term(a, inst, gens));
  return substitute(instantiate(inst.xi_lift.at(t.symbol()), gens), args);
}

inline void check_lift_hypothesis(const LiftInstance& inst, const std::map<std::string, Operation>& gens) {
  validate(inst.sigma);
  PatternSpace space = enumerate_patterns(inst.structure, inst.structure.type_arity());
  for (const auto& [name, arity] : inst.sigma.signature) {
    Operation lifted = Operation::term(name, arity, instantiate(inst.xi_lift.at(name), gens));
    TableOp image = type_image(lifted, inst.structure, space, {}, false).table;
    if (image != inst.xi.at(name))
      throw InputError("the lift of " + name + " does not map onto its assigned type operation");
  }
  auto lookup = [&](const std::string& s) -> const TableOp& { return inst.xi.at(s); };
  for (std::size_t e = 0; e < inst.sigma.equations.size(); ++e) {
    const Equation& eq = inst.sigma.equations[e];
    if (evaluate_term(eq.lhs, inst.sigma.arity, space.size(), lookup) !=
        evaluate_term(eq.rhs, inst.sigma.arity, space.size(), lookup))
      throw InputError("the assignment does not satisfy equation " + std::to_string(e + 1) + " in the type clone");
  }
}

}  // namespace detail

/// For each A_j: evaluates both sides of every equation on the argument matrix of A_j
/// in one lex session, builds rank equalizers, and re-verifies them column by column.
inline std::vector<WitnessTuple> lift(const LiftInstance& inst, const LiftOptions& options = {}) {
  const auto gens = inst.generator_map();
  for (const Operation& g : inst.generators) {
    if (g.is_table()) throw InputError("generator " + g.name + " is not an order term");
    SymbolicVerdict v = is_canonical_symbolic(g, inst.structure, default_k_max(inst.structure.type_arity()));
    if (!v.canonical) throw NotCanonical("generator " + g.name + " is not canonical");
  }
  if (options.check_hypothesis) detail::check_lift_hypothesis(inst, gens);
  for (std::size_t j = 1; j < inst.universes.size(); ++j)
    for (const Rational& x : inst.universes[j - 1])
      if (std::find(inst.universes[j].begin(), inst.universes[j].end(), x) == inst.universes[j].end())
        throw InputError("the sets A_j must increase");

  std::vector<std::pair<OrderTerm, OrderTerm>> sides;
  for (const Equation& e : inst.sigma.equations)
    sides.emplace_back(detail::lift_term(e.lhs, inst, gens), detail::lift_term(e.rhs, inst, gens));

  std::vector<WitnessTuple> out;
  for (std::size_t j = 0; j < inst.universes.size(); ++j) {
    WitnessTuple w;
    w.j = static_cast<int>(j);
    w.universe = inst.universes[j];
    std::vector<Column> args = enumerate_argument_matrix(w.universe, inst.sigma.arity, options.caps);
    LexRealization lex;
    for (std::size_t e = 0; e < sides.size(); ++e) {
      Column l = evaluate(sides[e].first, args, lex);
      Column r = evaluate(sides[e].second, args, lex);
      auto maps = find_equalizers(l, r, inst.structure);
      if (!maps)
        throw EqualizerFailure(w.j, static_cast<int>(e), pattern_of(inst.structure, l), pattern_of(inst.structure, r));
      for (std::size_t c = 0; c < l.size(); ++c) {
        if (maps->first(l[c]) != maps->second(r[c]))
          throw ConsistencyError("equalizers disagree on a column of A_" + std::to_string(j));
        ++w.columns_verified;
      }
      w.maps.push_back({std::move(maps->first), std::move(maps->second)});
    }
    out.push_back(std::move(w));
  }
  return out;
}

struct AccumulationReport {
  int depth = 0;
  std::vector<Rational> points;   // the first d points of the universe
  Pattern pattern;                // joint pattern of all witness images on the points
  std::vector<int> subsequence;   // indices into the witness list
  std::size_t distinct_patterns = 0;
  bool stable = false;            // the pattern recurs at least twice
};

/// Joint pattern of the images of `points` under every map of a witness tuple.
inline Pattern joint_pattern(const WitnessTuple& w, const std::vector<Rational>& points, const SymbolicStructure& s) {
  Column values;
  for (const EquationWitness& m : w.maps)
    for (const auto* alpha : {&m.alpha_lhs, &m.alpha_rhs})
      for (const Rational& x : points) values.push_back((*alpha)(x));
  return pattern_of(s, values);
}

/// Finite-depth shadow of the accumulation-point step: witness tuples modulo left
/// composition are classified by their joint pattern on the first d universe points,
/// and the most frequent class (latest on ties) is returned as a subsequence.
inline AccumulationReport approximate_accumulation(const std::vector<WitnessTuple>& witnesses, int d,
                                                   const SymbolicStructure& s) {
  if (witnesses.size() < 2) throw InputError("accumulation needs at least two witness tuples");
  if (d < 1) throw InputError("accumulation depth must be positive");
  std::vector<Rational> universe = witnesses.back().universe;
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  if (static_cast<std::size_t>(d) > universe.size())
    throw InputError("accumulation depth " + std::to_string(d) + " exceeds the " + std::to_string(universe.size()) +
                     " universe points available");
  AccumulationReport report;
  report.depth = d;
  report.points.assign(universe.begin(), universe.begin() + d);

  std::map<std::vector<int>, std::vector<int>> classes;
  std::vector<Pattern> patterns;
  for (std::size_t j = 0; j < witnesses.size(); ++j) {
    patterns.push_back(joint_pattern(witnesses[j], report.points, s));
    classes[patterns.back().code].push_back(static_cast<int>(j));
  }
  report.distinct_patterns = classes.size();
  const std::vector<int>* best = nullptr;
  for (const auto& [code, idx] : classes) {
    if (!best || idx.size() > best->size() || (idx.size() == best->size() && idx.back() > best->back())) best = &idx;
  }
  report.subsequence = *best;
  report.pattern = patterns[best->front()];
  report.stable = best->size() >= 2;
  return report;
}

struct TransferReport {
  SymbolicStructure structure;
  std::vector<TypeOperation> images;
  ProjHomResult proj_hom;
  FiniteClone clone;
  std::optional<CloneSatResult> witness_in_clone;
  std::optional<ProjectionResult> witness_in_projections;
  std::vector<WitnessTuple> lifted;
  std::optional<std::string> lift_error;
};

/// Type images of the generators, a homomorphism-to-1 analysis of their clone, and,
/// on refutation, the lift of the witness system to the concrete generators.
inline TransferReport analyze_transfer(const SymbolicStructure& s, const std::vector<Operation>& generators,
                                       const CloneCaps& clone_caps = {}, int depth = 3,
                                       const CanonicalCaps& caps = {}) {
  std::vector<TypeOperation> images = xi_infty(generators, s, caps);
  const int base = enumerate_patterns(s, s.type_arity(), caps.structure).size();
  auto [clone, result] = generate_and_check(base, as_generators(images), clone_caps);
  TransferReport report{s, std::move(images), std::move(result), std::move(clone), {}, {}, {}, {}};
  if (report.proj_hom.status != ProjHomStatus::Refuted) return report;

  const EquationSystem& w = report.proj_hom.witness;
  report.witness_in_clone = satisfiable_in_clone(w, report.clone);
  report.witness_in_projections = satisfiable_in_projections(w);
  if (report.witness_in_clone->status != SatStatus::Satisfiable) {
    report.lift_error = "witness system not satisfied in the type clone";
    return report;
  }
  try {
    LiftInstance inst = make_lift_instance(s, generators, w, *report.witness_in_clone->assignment, depth);
    report.lifted = lift(inst);
  } catch (const Error& e) {
    report.lift_error = e.what();
  }
  return report;
}

}  // namespace clonebench
