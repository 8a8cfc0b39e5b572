#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clonebench/clones.hpp"
#include "clonebench/error.hpp"
#include "clonebench/table_op.hpp"
#include "clonebench/term.hpp"

namespace clonebench {

struct Equation {
  Term lhs, rhs;

  std::string to_string() const { return lhs.to_string() + " = " + rhs.to_string(); }
};

/// A finite set of equations over a signature. `arity` is the common arity n: every
/// term is read as an n-ary operation on x1..xn.
struct EquationSystem {
  std::vector<std::pair<std::string, int>> signature;
  std::vector<Equation> equations;
  int arity = 1;

  int arity_of(const std::string& symbol) const {
    for (const auto& [name, a] : signature)
      if (name == symbol) return a;
    throw InputError("undeclared symbol " + symbol);
  }

  int position_of(const std::string& symbol) const {
    for (std::size_t i = 0; i < signature.size(); ++i)
      if (signature[i].first == symbol) return static_cast<int>(i);
    throw InputError("undeclared symbol " + symbol);
  }

  std::string to_string() const {
    std::ostringstream os;
    for (const auto& [name, a] : signature) os << "sig " << name << ' ' << a << '\n';
    for (const Equation& e : equations) os << "eq " << e.to_string() << '\n';
    return os.str();
  }
};

namespace detail {

inline void check_term(const Term& t, const EquationSystem& sys) {
  if (t.is_variable()) return;
  if (sys.arity_of(t.symbol()) != static_cast<int>(t.args().size()))
    throw InputError("symbol " + t.symbol() + " applied with " + std::to_string(t.args().size()) +
                     " arguments, declared arity " + std::to_string(sys.arity_of(t.symbol())));
  for (const Term& a : t.args()) check_term(a, sys);
}

}  // namespace detail

/// Sets the common arity to the largest variable index used (at least 1). Terms are
/// unchanged: reading each as an n-ary operation adds the missing variables as dummies.
inline EquationSystem pad_to_common_arity(EquationSystem sys) {
  int n = 1;
  for (const Equation& e : sys.equations) n = std::max({n, e.lhs.max_variable() + 1, e.rhs.max_variable() + 1});
  sys.arity = std::max(n, sys.arity);
  return sys;
}

inline void validate(const EquationSystem& sys) {
  std::set<std::string> names;
  for (const auto& [name, a] : sys.signature) {
    if (a < 1) throw InputError("symbol " + name + " needs positive arity");
    if (!names.insert(name).second) throw InputError("symbol " + name + " declared twice");
  }
  for (const Equation& e : sys.equations) {
    detail::check_term(e.lhs, sys);
    detail::check_term(e.rhs, sys);
    if (e.lhs.max_variable() >= sys.arity || e.rhs.max_variable() >= sys.arity)
      throw InputError("equation uses variables beyond the common arity");
  }
}

/// Equation file: `sig <name> <arity>` and `eq <term> = <term>` lines, '#' comments.
inline EquationSystem parse_equations(std::string_view text) {
  EquationSystem sys;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    try {
      if (head == "sig") {
        std::string name;
        int arity = 0;
        std::string extra;
        if (!(ls >> name >> arity) || (ls >> extra)) throw InputError("expected 'sig <name> <arity>'");
        if (arity < 1) throw InputError("symbol arity must be positive");
        if (name.size() > 1 && name[0] == 'x' &&
            std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; }))
          throw InputError("symbol name " + name + " clashes with variable syntax");
        for (const auto& s : sys.signature)
          if (s.first == name) throw InputError("symbol " + name + " declared twice");
        sys.signature.emplace_back(name, arity);
      } else if (head == "eq") {
        std::string rest;
        std::getline(ls, rest);
        auto eq = rest.find('=');
        if (eq == std::string::npos || rest.find('=', eq + 1) != std::string::npos)
          throw InputError("expected 'eq <term> = <term>'");
        Equation e{parse_term(rest.substr(0, eq)), parse_term(rest.substr(eq + 1))};
        detail::check_term(e.lhs, sys);
        detail::check_term(e.rhs, sys);
        sys.equations.push_back(std::move(e));
      } else {
        throw InputError("syntax error: unexpected '" + head + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return pad_to_common_arity(std::move(sys));
}

// ---------------------------------------------------------------------------
// The projection clone 1

/// Per equation: do both sides collapse to the same variable under sigma?
inline std::vector<bool> collapse_in_projections(const EquationSystem& sys, const std::map<std::string, int>& sigma) {
  std::vector<bool> out;
  for (const Equation& e : sys.equations) out.push_back(collapse(e.lhs, sigma) == collapse(e.rhs, sigma));
  return out;
}

struct ProjectionFailure {
  std::map<std::string, int> sigma;
  int equation = 0;
};

struct ProjectionResult {
  bool satisfiable = false;
  std::map<std::string, int> sigma;           // first satisfying assignment (0-based coordinates)
  std::vector<ProjectionFailure> failures;    // one per rejected assignment, in search order
  std::size_t assignments = 0;
};

namespace detail {

// Calls visit(sigma) for every coordinate assignment in lexicographic order (symbols in
// declaration order); stops early when visit returns false.
template <class F>
void for_each_coordinate_assignment(const std::vector<std::pair<std::string, int>>& signature, F&& visit) {
  std::vector<int> coords(signature.size(), 0);
  std::map<std::string, int> sigma;
  while (true) {
    for (std::size_t i = 0; i < signature.size(); ++i) sigma[signature[i].first] = coords[i];
    if (!visit(static_cast<const std::map<std::string, int>&>(sigma))) return;
    int pos = static_cast<int>(signature.size()) - 1;
    while (pos >= 0 && ++coords[pos] == signature[pos].second) coords[pos--] = 0;
    if (pos < 0) return;
  }
}

}  // namespace detail

/// Exhaustive search over all symbol -> coordinate maps.
inline ProjectionResult satisfiable_in_projections(const EquationSystem& sys) {
  validate(sys);
  ProjectionResult result;
  detail::for_each_coordinate_assignment(sys.signature, [&](const std::map<std::string, int>& sigma) {
    ++result.assignments;
    for (std::size_t e = 0; e < sys.equations.size(); ++e) {
      if (collapse(sys.equations[e].lhs, sigma) != collapse(sys.equations[e].rhs, sigma)) {
        result.failures.push_back({sigma, static_cast<int>(e)});
        return true;
      }
    }
    result.satisfiable = true;
    result.sigma = sigma;
    return false;
  });
  return result;
}

// ---------------------------------------------------------------------------
// Finite clones

enum class SatStatus { Satisfiable, Unsatisfiable, NotFoundWithinCaps };

inline std::string to_string(SatStatus s) {
  switch (s) {
    case SatStatus::Satisfiable:
      return "satisfiable";
    case SatStatus::Unsatisfiable:
      return "unsatisfiable";
    case SatStatus::NotFoundWithinCaps:
      return "not found within caps";
  }
  return "?";
}

struct OutsideWitness {
  int beta_lhs = 0;  // indices into the unary set F
  int beta_rhs = 0;
};

/// A satisfying clone homomorphism on the symbols of the system.
struct Assignment {
  std::map<std::string, TableOp> operations;
  std::map<std::string, Term> witnesses;  // catalog witness term of each chosen table
  std::vector<OutsideWitness> outside;    // per equation, modulo-outside searches only
};

struct CloneSatResult {
  SatStatus status = SatStatus::NotFoundWithinCaps;
  std::optional<Assignment> assignment;
  bool saturated = false;  // every catalog the search used is complete
  std::size_t assignments_tried = 0;
};

namespace detail {

inline int evaluate_point(const Term& t, const Tuple& input, const std::map<std::string, TableOp>& ops) {
  if (t.is_variable()) return input[t.index()];
  Tuple args;
  for (const Term& a : t.args()) args.push_back(evaluate_point(a, input, ops));
  return ops.at(t.symbol())(args);
}

inline int max_symbol_position(const Term& t, const EquationSystem& sys) {
  if (t.is_variable()) return -1;
  int m = sys.position_of(t.symbol());
  for (const Term& a : t.args()) m = std::max(m, max_symbol_position(a, sys));
  return m;
}

using EquationCheck = std::function<bool(std::size_t eq, const TableOp& lhs, const TableOp& rhs, OutsideWitness&)>;

inline CloneSatResult search_assignments(const EquationSystem& sys, const FiniteClone& clone,
                                         const EquationCheck& holds) {
  validate(sys);
  const std::size_t m = sys.signature.size();
  std::vector<const std::vector<CatalogEntry>*> candidates(m);
  bool saturated = true;
  for (std::size_t i = 0; i < m; ++i) {
    int a = sys.signature[i].second;
    if (a > clone.max_arity())
      throw InputError("symbol " + sys.signature[i].first + " has arity " + std::to_string(a) +
                       " beyond the clone's arity cap " + std::to_string(clone.max_arity()));
    candidates[i] = &clone.catalog(a);
    saturated = saturated && clone.saturated(a);
  }
  // equations become checkable once their last symbol (in declaration order) is assigned
  std::vector<std::vector<std::size_t>> ready(m + 1);
  for (std::size_t e = 0; e < sys.equations.size(); ++e) {
    int last = std::max(max_symbol_position(sys.equations[e].lhs, sys), max_symbol_position(sys.equations[e].rhs, sys));
    ready[last + 1].push_back(e);
  }

  CloneSatResult result;
  result.saturated = saturated;
  std::map<std::string, TableOp> ops;
  std::vector<int> chosen(m, 0);
  std::vector<OutsideWitness> outside(sys.equations.size());
  auto lookup = [&](const std::string& s) -> const TableOp& { return ops.at(s); };

  auto check_ready = [&](std::size_t level) {
    for (std::size_t e : ready[level]) {
      TableOp lhs = evaluate_term(sys.equations[e].lhs, sys.arity, clone.base(), lookup);
      TableOp rhs = evaluate_term(sys.equations[e].rhs, sys.arity, clone.base(), lookup);
      if (!holds(e, lhs, rhs, outside[e])) return false;
    }
    return true;
  };

  bool found = false;
  auto search = [&](auto&& self, std::size_t level) -> void {
    if (level == m) {
      found = true;
      return;
    }
    const auto& cands = *candidates[level];
    for (std::size_t c = 0; c < cands.size() && !found; ++c) {
      ++result.assignments_tried;
      ops.insert_or_assign(sys.signature[level].first, cands[c].table);
      chosen[level] = static_cast<int>(c);
      if (check_ready(level + 1)) self(self, level + 1);
    }
    if (!found) ops.erase(sys.signature[level].first);
  };
  if (check_ready(0)) search(search, 0);

  if (found) {
    Assignment a;
    for (std::size_t i = 0; i < m; ++i) {
      const CatalogEntry& entry = (*candidates[i])[chosen[i]];
      a.operations.emplace(sys.signature[i].first, entry.table);
      a.witnesses.emplace(sys.signature[i].first, entry.witness);
    }
    a.outside = outside;
    result.status = SatStatus::Satisfiable;
    result.assignment = std::move(a);
  } else {
    result.status = saturated ? SatStatus::Unsatisfiable : SatStatus::NotFoundWithinCaps;
  }
  return result;
}

}  // namespace detail

/// Pointwise re-evaluation of every equation, independent of table composition. With
/// a unary set F, each equation is checked as beta_lhs(s) = beta_rhs(t).
inline bool verify_assignment(const EquationSystem& sys, const Assignment& a, int base,
                              const std::vector<TableOp>* outside_set = nullptr) {
  TableOp shape{sys.arity, base, std::vector<int>(TableOp::table_size(sys.arity, base))};
  for (std::size_t e = 0; e < sys.equations.size(); ++e) {
    for (std::size_t x = 0; x < shape.values.size(); ++x) {
      Tuple input = shape.decode(x);
      int l = detail::evaluate_point(sys.equations[e].lhs, input, a.operations);
      int r = detail::evaluate_point(sys.equations[e].rhs, input, a.operations);
      if (outside_set) {
        l = (*outside_set).at(a.outside.at(e).beta_lhs).values[l];
        r = (*outside_set).at(a.outside.at(e).beta_rhs).values[r];
      }
      if (l != r) return false;
    }
  }
  return true;
}

/// Search over symbol -> catalog entry maps (symbols in declaration order, entries in
/// catalog order). "Unsatisfiable" is only claimed when every catalog used is saturated.
inline CloneSatResult satisfiable_in_clone(const EquationSystem& sys, const FiniteClone& clone) {
  CloneSatResult r = detail::search_assignments(
      sys, clone, [](std::size_t, const TableOp& l, const TableOp& rr, OutsideWitness&) { return l == rr; });
  if (r.assignment && !verify_assignment(sys, *r.assignment, clone.base()))
    throw ConsistencyError("satisfying assignment failed pointwise re-verification");
  return r;
}

/// As satisfiable_in_clone, but an equation (s,t) only needs beta_s o s = beta_t o t for
/// some beta_s, beta_t in F.
inline CloneSatResult satisfiable_modulo_outside(const EquationSystem& sys, const FiniteClone& clone,
                                                 const std::vector<TableOp>& unaries) {
  if (unaries.empty()) throw InputError("the outside unary set must be nonempty");
  for (const TableOp& u : unaries)
    if (u.arity != 1 || u.base != clone.base() || !u.is_valid())
      throw InputError("outside maps must be unary operations on the clone's base set");
  CloneSatResult r = detail::search_assignments(
      sys, clone, [&](std::size_t, const TableOp& l, const TableOp& rr, OutsideWitness& w) {
        for (std::size_t i = 0; i < unaries.size(); ++i) {
          TableOp bl = post_compose(unaries[i], l);
          for (std::size_t j = 0; j < unaries.size(); ++j) {
            if (bl == post_compose(unaries[j], rr)) {
              w = {static_cast<int>(i), static_cast<int>(j)};
              return true;
            }
          }
        }
        return false;
      });
  if (r.assignment && !verify_assignment(sys, *r.assignment, clone.base(), &unaries))
    throw ConsistencyError("modulo-outside assignment failed pointwise re-verification");
  return r;
}

// ---------------------------------------------------------------------------
// Homomorphisms to 1

enum class ProjHomStatus { Found, Refuted, Undecided };

inline std::string to_string(ProjHomStatus s) {
  switch (s) {
    case ProjHomStatus::Found:
      return "found";
    case ProjHomStatus::Refuted:
      return "refuted";
    case ProjHomStatus::Undecided:
      return "undecided at caps";
  }
  return "?";
}

struct ProjHomCaps {
  std::size_t max_assignments = 1'000'000;  // coordinate assignments to the generators
};

struct ProjHomResult {
  ProjHomStatus status = ProjHomStatus::Undecided;
  std::map<std::string, int> sigma;  // generator -> coordinate (0-based), when found
  bool saturated = false;            // every arity's catalog reached a fixpoint
  EquationSystem witness;            // refuted: holds in the clone, fails in 1
  std::size_t assignments = 0;
  std::size_t collisions_checked = 0;
};

namespace detail {

// Follows the collisions of a clone in generation order and keeps, for each coordinate
// assignment to the generators, the first collision it fails on.
class ProjHomChecker {
 public:
  struct Killer {
    int arity = 0;
    std::size_t sequence = 0;
    Equation equation;
  };

  explicit ProjHomChecker(const std::vector<Generator>& generators) : generators_(generators) {
    for (const Generator& g : generators) signature_.emplace_back(g.name, g.table.arity);
    for_each_coordinate_assignment(signature_, [&](const std::map<std::string, int>& sigma) {
      sigmas_.push_back(sigma);
      return true;
    });
    killers_.resize(sigmas_.size());
    coords_.resize(sigmas_.size());
    alive_ = sigmas_.size();
  }

  static std::size_t count_assignments(const std::vector<Generator>& generators, std::size_t cap) {
    std::size_t n = 1;
    for (const Generator& g : generators) {
      n *= static_cast<std::size_t>(g.table.arity);
      if (n > cap) return cap + 1;
    }
    return n;
  }

  void observe(int arity, std::size_t sequence, const Collision& c, const std::vector<CatalogEntry>& catalog) {
    ++collisions_;
    if (alive_ == 0) return;
    if (arity != arity_) {
      arity_ = arity;
      for (auto& v : coords_) v.clear();
    }
    for (std::size_t s = 0; s < sigmas_.size(); ++s) {
      if (killers_[s]) continue;
      auto& coord = coords_[s];
      while (coord.size() < catalog.size()) coord.push_back(collapse(catalog[coord.size()].witness, sigmas_[s]));
      int lhs = c.generator < 0 ? c.args[0] : coord[c.args[sigma_index(s, c.generator)]];
      if (lhs == coord[c.entry]) continue;
      Term lhs_term;
      if (c.generator < 0) {
        lhs_term = Term::variable(c.args[0]);
      } else {
        std::vector<Term> args;
        for (int a : c.args) args.push_back(catalog[a].witness);
        lhs_term = Term::apply(generators_[c.generator].name, std::move(args));
      }
      killers_[s] = Killer{arity, sequence, Equation{std::move(lhs_term), catalog[c.entry].witness}};
      --alive_;
    }
  }

  ProjHomResult finish(bool saturated) const {
    ProjHomResult result;
    result.assignments = sigmas_.size();
    result.collisions_checked = collisions_;
    result.saturated = saturated;
    for (std::size_t s = 0; s < sigmas_.size(); ++s) {
      if (!killers_[s]) {
        result.status = ProjHomStatus::Found;
        result.sigma = sigmas_[s];
        return result;
      }
    }

    // Candidates: the first killer of every assignment. Drop them greedily while every
    // assignment stays killed.
    std::map<std::pair<int, std::size_t>, const Killer*> candidates;
    for (const auto& k : killers_) candidates.emplace(std::make_pair(k->arity, k->sequence), &*k);
    std::vector<const Killer*> chosen;
    for (const auto& [key, k] : candidates) chosen.push_back(k);
    std::vector<std::vector<bool>> kills(chosen.size());
    for (std::size_t i = 0; i < chosen.size(); ++i)
      for (const auto& sigma : sigmas_)
        kills[i].push_back(collapse(chosen[i]->equation.lhs, sigma) != collapse(chosen[i]->equation.rhs, sigma));
    std::vector<bool> keep(chosen.size(), true);
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      keep[i] = false;
      bool all_killed = true;
      for (std::size_t s = 0; s < sigmas_.size() && all_killed; ++s) {
        bool hit = false;
        for (std::size_t j = 0; j < chosen.size() && !hit; ++j) hit = keep[j] && kills[j][s];
        all_killed = hit;
      }
      if (!all_killed) keep[i] = true;
    }

    EquationSystem w;
    w.signature = signature_;
    for (std::size_t i = 0; i < chosen.size(); ++i)
      if (keep[i]) w.equations.push_back(chosen[i]->equation);
    result.witness = pad_to_common_arity(std::move(w));
    result.status = ProjHomStatus::Refuted;
    return result;
  }

 private:
  int sigma_index(std::size_t s, int generator) const {
    return sigmas_[s].at(generators_[generator].name);
  }

  std::vector<Generator> generators_;
  std::vector<std::pair<std::string, int>> signature_;
  std::vector<std::map<std::string, int>> sigmas_;
  std::vector<std::optional<Killer>> killers_;
  std::vector<std::vector<int>> coords_;
  std::size_t alive_ = 0;
  std::size_t collisions_ = 0;
  int arity_ = 0;
};

inline bool all_arities_saturated(const FiniteClone& clone) {
  for (int l = 1; l <= clone.max_arity(); ++l)
    if (!clone.saturated(l)) return false;
  return true;
}

}  // namespace detail

/// A homomorphism to 1 is fixed by a coordinate for each generator; it is well defined
/// iff any two terms with equal tables collapse to the same variable. Every equal-table
/// pair met during generation is checked against every coordinate assignment. When the
/// clone dropped collisions past its recording cap, it is regenerated to see them all.
inline ProjHomResult has_projective_homomorphism(const FiniteClone& clone, const ProjHomCaps& caps = {}) {
  const auto& gens = clone.generators();
  if (detail::ProjHomChecker::count_assignments(gens, caps.max_assignments) > caps.max_assignments) {
    ProjHomResult r;
    r.status = ProjHomStatus::Undecided;
    r.saturated = detail::all_arities_saturated(clone);
    return r;
  }
  detail::ProjHomChecker checker(gens);
  bool truncated = false;
  for (int l = 1; l <= clone.max_arity(); ++l) truncated = truncated || clone.collisions_truncated(l);
  if (truncated) {
    generate(clone.base(), gens, clone.caps(),
             [&](int l, std::size_t seq, const Collision& c, const std::vector<CatalogEntry>& cat) {
               checker.observe(l, seq, c, cat);
             });
  } else {
    for (int l = 1; l <= clone.max_arity(); ++l) {
      const auto& cols = clone.collisions(l);
      for (std::size_t i = 0; i < cols.size(); ++i) checker.observe(l, i, cols[i], clone.catalog(l));
    }
  }
  return checker.finish(detail::all_arities_saturated(clone));
}

/// Generates the clone and checks for a homomorphism to 1 in the same pass.
inline std::pair<FiniteClone, ProjHomResult> generate_and_check(int base, std::vector<Generator> generators,
                                                                const CloneCaps& clone_caps = {},
                                                                const ProjHomCaps& caps = {}) {
  if (detail::ProjHomChecker::count_assignments(generators, caps.max_assignments) > caps.max_assignments) {
    FiniteClone clone = generate(base, std::move(generators), clone_caps);
    ProjHomResult r;
    r.saturated = detail::all_arities_saturated(clone);
    return {std::move(clone), std::move(r)};
  }
  detail::ProjHomChecker checker(generators);
  FiniteClone clone = generate(base, std::move(generators), clone_caps,
                               [&](int l, std::size_t seq, const Collision& c, const std::vector<CatalogEntry>& cat) {
                                 checker.observe(l, seq, c, cat);
                               });
  ProjHomResult r = checker.finish(detail::all_arities_saturated(clone));
  return {std::move(clone), std::move(r)};
}


/// The two independent checks on a refutation certificate: satisfiable in the clone,
/// unsatisfiable in 1.
struct RefutationCheck {
  CloneSatResult in_clone;
  ProjectionResult in_projections;
  bool consistent() const {
    return in_clone.status == SatStatus::Satisfiable && !in_projections.satisfiable;
  }
};

inline RefutationCheck verify_refutation(const EquationSystem& witness, const FiniteClone& clone) {
  return {satisfiable_in_clone(witness, clone), satisfiable_in_projections(witness)};
}

}  // namespace clonebench
