#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clonebench/canonical.hpp"
#include "clonebench/clones.hpp"
#include "clonebench/equations.hpp"
#include "clonebench/error.hpp"
#include "clonebench/finite_structure.hpp"
#include "clonebench/lifting.hpp"
#include "clonebench/operation.hpp"
#include "clonebench/qclone.hpp"
#include "clonebench/symbolic_structure.hpp"

namespace clonebench::cli {

enum ExitCode : int { Ok = 0, Negative = 1, BadInput = 2, CapExhausted = 3 };

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  int k = 2;
  std::optional<int> k_max;
  int arity_cap = 6;
  int depth_cap = 4;
  std::size_t catalog_cap = 100'000;
  std::uint64_t seed = 0;
  std::string out;
  int depth = 3;
  int samples = 5;
  int n = 2;
  int acc_depth = 2;
  std::string structure;  // optional type-clone structure for sat, sat-mod, proj-hom

  CloneCaps clone_caps() const {
    CloneCaps c;
    c.max_arity = arity_cap;
    c.max_depth = depth_cap;
    c.max_catalog = catalog_cap;
    return c;
  }

  std::string describe() const {
    std::ostringstream os;
    os << "config: k=" << k << " kmax=" << (k_max ? std::to_string(*k_max) : std::string("default"))
       << " arity-cap=" << arity_cap << " depth-cap=" << depth_cap << " catalog-cap=" << catalog_cap
       << " seed=" << seed << " depth=" << depth << " samples=" << samples << " n=" << n
       << " acc-depth=" << acc_depth;
    if (!structure.empty()) os << " structure=" << structure;
    os << '\n' << "inputs:";
    for (const std::string& in : inputs) os << ' ' << in;
    os << '\n';
    return os.str();
  }
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class F>
auto parse_file(const std::string& path, F&& parse) {
  std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

struct StructureArg {
  std::optional<SymbolicStructure> symbolic;
  std::optional<FiniteStructure> finite;
  int type_arity() const { return symbolic ? symbolic->type_arity() : finite->type_arity(); }
};

inline StructureArg load_structure(const std::string& arg) {
  if (arg == "dlo") return {SymbolicStructure::dlo(), std::nullopt};
  if (arg == "pureset") return {SymbolicStructure::pure_set(), std::nullopt};
  return {std::nullopt, parse_file(arg, [](const std::string& t) { return parse_structure(t); })};
}

inline OpsFile load_ops(const std::string& path) {
  return parse_file(path, [](const std::string& t) { return parse_ops(t); });
}

inline EquationSystem load_equations(const std::string& path) {
  return parse_file(path, [](const std::string& t) { return parse_equations(t); });
}

inline std::string tuple_string(const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

inline std::string point_string(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + to_string(p[i]);
  return s + ")";
}

inline std::string sigma_string(const std::map<std::string, int>& sigma) {
  std::string s;
  for (const auto& [name, c] : sigma) s += (s.empty() ? "" : " ") + name + "->x" + std::to_string(c + 1);
  return s.empty() ? "(no symbols)" : s;
}

inline std::string saturation_string(const FiniteClone& c) {
  std::ostringstream os;
  os << "saturation:";
  for (int l = 1; l <= c.max_arity(); ++l) {
    os << " arity" << l << '=' << (c.saturated(l) ? "yes" : "no");
    if (c.collisions_truncated(l)) os << "(collisions truncated)";
  }
  os << '\n' << "catalog sizes:";
  for (int l = 1; l <= c.max_arity(); ++l) os << ' ' << c.catalog(l).size();
  os << '\n';
  return os.str();
}

inline std::vector<Operation> table_ops(const OpsFile& ops) {
  for (const Operation& op : ops.ops)
    if (!op.is_table()) throw InputError("operation " + op.name + " is not a concrete table");
  return ops.ops;
}

// The clone the equation tools work in: the ops' own tables, or their type clone
// over a structure.
struct CloneSetup {
  int base = 0;
  std::vector<Generator> generators;
  std::string description;
};

inline CloneSetup clone_setup(const OpsFile& ops, const RunConfig& cfg) {
  CloneSetup setup;
  if (cfg.structure.empty()) {
    for (const Operation& op : table_ops(ops)) setup.generators.push_back({op.name, op.as_table()});
    if (!ops.base) throw InputError("operation file defines no base set");
    setup.base = *ops.base;
    setup.description = "clone generated by the concrete tables on {0.." + std::to_string(setup.base - 1) + "}";
    return setup;
  }
  StructureArg s = load_structure(cfg.structure);
  std::vector<TypeOperation> images;
  if (s.symbolic) {
    images = xi_infty(ops.ops, *s.symbolic);
    setup.base = enumerate_patterns(*s.symbolic, s.symbolic->type_arity()).size();
  } else {
    images = xi_infty(ops.ops, *s.finite);
    setup.base = orbits(*s.finite, s.finite->type_arity()).size();
  }
  setup.generators = as_generators(images);
  setup.description = "type clone on the " + std::to_string(setup.base) + " types of arity " +
                      std::to_string(s.type_arity()) + " over " + cfg.structure;
  return setup;
}

inline int max_symbol_arity(const EquationSystem& sys) {
  int m = 1;
  for (const auto& [name, a] : sys.signature) m = std::max(m, a);
  return m;
}

inline CloneCaps equation_caps(const RunConfig& cfg, const EquationSystem& sys) {
  const int needed = max_symbol_arity(sys);
  if (needed > cfg.arity_cap)
    throw InputError("symbol arity " + std::to_string(needed) + " exceeds the arity cap " +
                     std::to_string(cfg.arity_cap));
  CloneCaps caps = cfg.clone_caps();
  caps.max_arity = needed;
  return caps;
}

inline std::string assignment_string(const Assignment& a, const std::vector<TableOp>* outside = nullptr) {
  std::ostringstream os;
  for (const auto& [name, table] : a.operations)
    os << "  " << name << " -> " << a.witnesses.at(name).to_string() << "  table [" << table.to_string() << "]\n";
  if (outside)
    for (std::size_t e = 0; e < a.outside.size(); ++e)
      os << "  equation " << e + 1 << ": beta_lhs = F" << a.outside[e].beta_lhs + 1 << " ["
         << (*outside)[a.outside[e].beta_lhs].to_string() << "], beta_rhs = F" << a.outside[e].beta_rhs + 1 << " ["
         << (*outside)[a.outside[e].beta_rhs].to_string() << "]\n";
  return os.str();
}

inline int sat_exit(const CloneSatResult& r) {
  switch (r.status) {
    case SatStatus::Satisfiable:
      return Ok;
    case SatStatus::Unsatisfiable:
      return Negative;
    case SatStatus::NotFoundWithinCaps:
      return CapExhausted;
  }
  return CapExhausted;
}

// ---------------------------------------------------------------------------

inline int cmd_orbits(const RunConfig& cfg, std::ostream& os) {
  StructureArg s = load_structure(cfg.inputs.at(0));
  if (s.symbolic) {
    PatternSpace space = enumerate_patterns(*s.symbolic, cfg.k);
    os << "structure: " << s.symbolic->name() << '\n';
    os << "types of " << cfg.k << "-tuples: " << space.size() << '\n';
    for (int t = 0; t < space.size(); ++t) os << "  type " << t << ": " << space.pattern(t).to_string() << '\n';
    return Ok;
  }
  auto group = automorphisms(*s.finite);
  OrbitSpace space = orbits(*s.finite, cfg.k, group);
  os << "structure: domain " << s.finite->domain_size() << ", " << s.finite->relations().size() << " relations\n";
  os << "automorphisms: " << group.size() << '\n';
  os << "orbits of " << cfg.k << "-tuples: " << space.size() << '\n';
  for (int t = 0; t < space.size(); ++t)
    os << "  orbit " << t << ": representative " << tuple_string(space.representative(t)) << ", size "
       << space.orbit_size(t) << '\n';
  return Ok;
}

inline int cmd_canonical(const RunConfig& cfg, std::ostream& os) {
  StructureArg s = load_structure(cfg.inputs.at(0));
  OpsFile ops = load_ops(cfg.inputs.at(1));
  const int k_max = cfg.k_max.value_or(default_k_max(s.type_arity()));
  os << "k_max: " << k_max << '\n';
  bool all = true;
  for (const Operation& op : ops.ops) {
    if (s.symbolic) {
      SymbolicVerdict v = is_canonical_symbolic(op, *s.symbolic, k_max);
      all = all && v.canonical;
      os << op.name << ": " << (v.canonical ? "canonical" : "not canonical");
      if (v.counterexample) os << "; " << describe(*v.counterexample, s.symbolic->kind);
    } else {
      if (!op.is_table()) throw InputError("operation " + op.name + " is not a table");
      FiniteVerdict v = is_canonical_finite(op.as_table(), *s.finite, k_max);
      all = all && v.canonical;
      os << op.name << ": " << (v.canonical ? "canonical" : "not canonical");
      if (v.counterexample) os << "; " << describe(*v.counterexample);
    }
    os << '\n';
  }
  return all ? Ok : Negative;
}

inline int cmd_type_image(const RunConfig& cfg, std::ostream& os) {
  StructureArg s = load_structure(cfg.inputs.at(0));
  OpsFile ops = load_ops(cfg.inputs.at(1));
  for (const Operation& op : ops.ops) {
    try {
      if (s.symbolic) {
        PatternSpace space = enumerate_patterns(*s.symbolic, cfg.k);
        TypeOperation t = type_image(op, *s.symbolic, space);
        os << op.name << " on " << space.size() << " types of arity " << cfg.k << ": [" << t.table.to_string()
           << "]\n";
      } else {
        OrbitSpace space = orbits(*s.finite, cfg.k);
        TypeOperation t = type_image(op, *s.finite, space);
        os << op.name << " on " << space.size() << " orbits of arity " << cfg.k << ": [" << t.table.to_string()
           << "]\n";
      }
    } catch (const NotCanonical& e) {
      os << e.what() << '\n';
      return Negative;
    }
  }
  return Ok;
}

inline int cmd_sat1(const RunConfig& cfg, std::ostream& os) {
  EquationSystem sys = load_equations(cfg.inputs.at(0));
  ProjectionResult r = satisfiable_in_projections(sys);
  if (r.satisfiable) {
    os << "satisfiable in projections: " << sigma_string(r.sigma) << " (after " << r.assignments
       << " assignments)\n";
    return Ok;
  }
  os << "unsatisfiable in projections, " << r.failures.size() << "/" << r.assignments << " assignments fail\n";
  for (const ProjectionFailure& f : r.failures)
    os << "  " << sigma_string(f.sigma) << " fails equation " << f.equation + 1 << '\n';
  return Negative;
}

inline int cmd_sat(const RunConfig& cfg, std::ostream& os, bool modulo) {
  EquationSystem sys = load_equations(cfg.inputs.at(0));
  OpsFile ops = load_ops(cfg.inputs.at(1));
  CloneSetup setup = clone_setup(ops, cfg);
  FiniteClone clone = generate(setup.base, setup.generators, equation_caps(cfg, sys));
  os << setup.description << '\n' << saturation_string(clone);
  CloneSatResult r;
  std::vector<TableOp> outside;
  if (modulo) {
    OpsFile f = load_ops(cfg.inputs.at(2));
    for (const Operation& op : table_ops(f)) outside.push_back(op.as_table());
    os << "outside maps: " << outside.size() << '\n';
    r = satisfiable_modulo_outside(sys, clone, outside);
  } else {
    r = satisfiable_in_clone(sys, clone);
  }
  os << "result: " << to_string(r.status) << (modulo ? " modulo the outside maps" : "") << " ("
     << r.assignments_tried << " assignments tried)\n";
  if (r.assignment) os << assignment_string(*r.assignment, modulo ? &outside : nullptr) << "verified pointwise: yes\n";
  return sat_exit(r);
}

inline int cmd_proj_hom(const RunConfig& cfg, std::ostream& os) {
  OpsFile ops = load_ops(cfg.inputs.at(0));
  CloneSetup setup = clone_setup(ops, cfg);
  auto [clone, r] = generate_and_check(setup.base, setup.generators, cfg.clone_caps());
  os << setup.description << '\n' << saturation_string(clone);
  os << "collisions checked: " << r.collisions_checked << ", coordinate assignments: " << r.assignments << '\n';
  os << "homomorphism to projections: " << to_string(r.status) << '\n';
  switch (r.status) {
    case ProjHomStatus::Found:
      os << "  " << sigma_string(r.sigma) << (r.saturated ? "" : " (verified up to caps)") << '\n';
      return Ok;
    case ProjHomStatus::Refuted: {
      os << "witness system:\n" << r.witness.to_string();
      RefutationCheck check = verify_refutation(r.witness, clone);
      os << "witness satisfiable in the clone: " << to_string(check.in_clone.status) << '\n';
      os << "witness satisfiable in projections: " << (check.in_projections.satisfiable ? "yes" : "no") << '\n';
      if (!check.consistent()) throw ConsistencyError("refutation witness failed re-verification");
      return Negative;
    }
    case ProjHomStatus::Undecided:
      return CapExhausted;
  }
  return CapExhausted;
}

inline void print_witnesses(const std::vector<WitnessTuple>& ws, std::ostream& os) {
  for (const WitnessTuple& w : ws) {
    os << "A_" << w.j << " = {";
    for (std::size_t i = 0; i < w.universe.size(); ++i) os << (i ? "," : "") << to_string(w.universe[i]);
    os << "}: " << w.columns_verified << " samples verified\n";
    for (std::size_t e = 0; e < w.maps.size(); ++e) {
      os << "  equation " << e + 1 << ": alpha_lhs " << w.maps[e].alpha_lhs.describe() << '\n';
      os << "  equation " << e + 1 << ": alpha_rhs " << w.maps[e].alpha_rhs.describe() << '\n';
    }
  }
}

inline void print_accumulation(const std::vector<WitnessTuple>& ws, const RunConfig& cfg, const SymbolicStructure& s,
                               std::ostream& os) {
  if (ws.size() < 2 || ws.front().maps.empty()) {
    os << "accumulation: not applicable (needs two witness tuples with at least one equation)\n";
    return;
  }
  AccumulationReport acc = approximate_accumulation(ws, cfg.acc_depth, s);
  os << "accumulation at depth " << acc.depth << ": " << (acc.stable ? "stable" : "not stable") << ", pattern "
     << acc.pattern.to_string() << ", subsequence";
  for (int j : acc.subsequence) os << ' ' << j;
  os << " (" << acc.distinct_patterns << " distinct patterns)\n";
}

inline int cmd_lift(const RunConfig& cfg, std::ostream& os) {
  StructureArg s = load_structure(cfg.inputs.at(0));
  if (!s.symbolic) throw InputError("lift works over dlo or pureset");
  OpsFile ops = load_ops(cfg.inputs.at(1));
  EquationSystem sys = load_equations(cfg.inputs.at(2));
  std::vector<TypeOperation> images = xi_infty(ops.ops, *s.symbolic);
  const int base = enumerate_patterns(*s.symbolic, s.symbolic->type_arity()).size();
  std::optional<Assignment> assignment = generator_assignment(sys, ops.ops, *s.symbolic);
  if (assignment) {
    os << "symbols lifted to the operations of the same name\n";
    os << assignment_string(*assignment);
  } else {
    FiniteClone clone = generate(base, as_generators(images), equation_caps(cfg, sys));
    os << "type clone on " << base << " types over " << s.symbolic->name() << '\n' << saturation_string(clone);
    CloneSatResult r = satisfiable_in_clone(sys, clone);
    os << "system in the type clone: " << to_string(r.status) << '\n';
    if (!r.assignment) return sat_exit(r);
    os << assignment_string(*r.assignment);
    assignment = r.assignment;
  }
  LiftInstance inst = make_lift_instance(*s.symbolic, ops.ops, sys, *assignment, cfg.depth);
  std::vector<WitnessTuple> ws;
  try {
    ws = lift(inst);
  } catch (const EqualizerFailure& e) {
    os << e.what() << '\n';
    return Negative;
  } catch (const InputError& e) {
    os << "hypothesis check failed: " << e.what() << '\n';
    return Negative;
  }
  print_witnesses(ws, os);
  print_accumulation(ws, cfg, *s.symbolic, os);
  return Ok;
}

inline int cmd_analyze(const RunConfig& cfg, std::ostream& os) {
  StructureArg s = load_structure(cfg.inputs.at(0));
  if (!s.symbolic) throw InputError("analyze works over dlo or pureset");
  OpsFile ops = load_ops(cfg.inputs.at(1));
  TransferReport rep = analyze_transfer(*s.symbolic, ops.ops, cfg.clone_caps(), cfg.depth);
  os << "structure: " << s.symbolic->name() << '\n';
  for (const TypeOperation& t : rep.images) os << "type image " << t.name << ": [" << t.table.to_string() << "]\n";
  os << saturation_string(rep.clone);
  os << "homomorphism to projections: " << to_string(rep.proj_hom.status) << '\n';
  if (rep.proj_hom.status == ProjHomStatus::Found) {
    os << "  " << sigma_string(rep.proj_hom.sigma) << (rep.proj_hom.saturated ? "" : " (verified up to caps)")
       << '\n';
    return Ok;
  }
  if (rep.proj_hom.status == ProjHomStatus::Undecided) return CapExhausted;
  os << "witness system:\n" << rep.proj_hom.witness.to_string();
  os << "witness satisfiable in the type clone: " << to_string(rep.witness_in_clone->status) << '\n';
  os << "witness satisfiable in projections: " << (rep.witness_in_projections->satisfiable ? "yes" : "no") << '\n';
  if (rep.lift_error) {
    os << "lift failed: " << *rep.lift_error << '\n';
    return Negative;
  }
  os << "lifted witnesses (satisfiable modulo automorphisms from the outside on each A_j):\n";
  print_witnesses(rep.lifted, os);
  print_accumulation(rep.lifted, cfg, *s.symbolic, os);
  return Negative;
}

inline int cmd_qdemo(const RunConfig& cfg, std::ostream& os) {
  NoncontinuityReport rep = noncontinuity_demo(cfg.n, cfg.samples, cfg.seed);
  os << "member: " << rep.original.to_string() << " with xi = " << xi(rep.original) << '\n';
  os << "restriction to " << rep.restriction.size() << " points:\n";
  for (const auto& [u, v] : rep.restriction) os << "  " << point_string(u) << " -> " << to_string(v) << '\n';
  os << "extensions: " << rep.extensions.size() << '\n';
  for (std::size_t t = 0; t < rep.extensions.size(); ++t)
    os << "  " << rep.extensions[t].to_string() << " xi = " << rep.xi_values[t] << '\n';
  os << "all extensions agree on the restriction: " << (rep.agree_on_restriction ? "yes" : "no") << '\n';

  QFunction f = cfg.inputs.empty() ? rep.original
                                   : parse_file(cfg.inputs[0], [](const std::string& t) { return parse_member(t); });
  if (!cfg.inputs.empty()) os << "member file: " << f.to_string() << " with xi = " << xi(f) << '\n';
  UniquenessReport u = uniqueness_witnesses(f);
  os << "uniqueness witnesses: " << u.witnesses.size() << " unary members, range above threshold: "
     << (u.range_above_threshold ? "yes" : "no") << ", composite depends only on x" << f.coordinate() << ": "
     << (u.depends_only_on_coordinate ? "yes" : "no") << " (" << u.grid_points << " grid points)\n";
  bool ok = rep.agree_on_restriction && u.range_above_threshold && u.depends_only_on_coordinate;
  return ok ? Ok : Negative;
}

}  // namespace detail

/// Runs one subcommand. args excludes the program name. The report goes to `out`, or
/// to the --out file.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"clonebench: clones, canonical functions and projective homomorphisms"};
  app.require_subcommand(1);
  app.fallthrough();
  int k_max = 0;
  app.add_option("--k", cfg.k, "tuple length for orbits and type images")->check(CLI::PositiveNumber);
  app.add_option("--kmax", k_max, "largest tuple length for canonicity checks")->check(CLI::PositiveNumber);
  app.add_option("--arity-cap", cfg.arity_cap, "largest arity generated in clones")->check(CLI::PositiveNumber);
  app.add_option("--depth-cap", cfg.depth_cap, "largest composition depth")->check(CLI::PositiveNumber);
  app.add_option("--catalog-cap", cfg.catalog_cap, "largest catalog size per arity")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "seed for sampled points");
  app.add_option("--out", cfg.out, "write the report to this file");
  app.add_option("--depth", cfg.depth, "lift depth J")->check(CLI::NonNegativeNumber);
  app.add_option("--samples", cfg.samples, "sample count for qdemo")->check(CLI::NonNegativeNumber);
  app.add_option("--n", cfg.n, "arity for qdemo")->check(CLI::PositiveNumber);
  app.add_option("--acc-depth", cfg.acc_depth, "depth for the accumulation report")->check(CLI::PositiveNumber);
  app.add_option("--structure", cfg.structure, "dlo, pureset or a structure file: work in the type clone");

  struct SubcommandInfo {
    const char* name;
    const char* help;
    std::size_t min_inputs, max_inputs;
  };
  const std::vector<SubcommandInfo> subcommands{
      {"orbits", "orbits of k-tuples: <structure>", 1, 1},
      {"canonical", "canonicity check: <structure> <ops>", 2, 2},
      {"type-image", "type images on k-types: <structure> <ops>", 2, 2},
      {"sat", "satisfiability in a clone: <eqs> <ops>", 2, 2},
      {"sat1", "satisfiability in projections: <eqs>", 1, 1},
      {"sat-mod", "satisfiability modulo outside unaries: <eqs> <ops> <unary ops>", 3, 3},
      {"proj-hom", "homomorphism to projections: <ops>", 1, 1},
      {"lift", "lift a type-clone solution: <structure> <ops> <eqs>", 3, 3},
      {"analyze", "transfer analysis: <structure> <ops>", 2, 2},
      {"qdemo", "counterexample clone demo: [member file]", 0, 1},
  };
  std::vector<CLI::App*> subs;
  std::vector<std::vector<std::string>> positional(subcommands.size());
  for (std::size_t i = 0; i < subcommands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(subcommands[i].name, subcommands[i].help);
    if (subcommands[i].max_inputs > 0) {
      auto* opt = sub->add_option("inputs", positional[i], "input files");
      opt->expected(static_cast<int>(subcommands[i].min_inputs), static_cast<int>(subcommands[i].max_inputs));
      if (subcommands[i].min_inputs > 0) opt->required();
    }
    subs.push_back(sub);
  }

  std::vector<const char*> argv{"clonebench"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? Ok : BadInput;
  }
  if (k_max > 0) cfg.k_max = k_max;

  std::size_t which = 0;
  for (; which < subs.size(); ++which)
    if (subs[which]->parsed()) break;
  cfg.subcommand = subcommands[which].name;
  cfg.inputs = positional[which];

  std::ostringstream report;
  report << "clonebench " << cfg.subcommand << '\n' << cfg.describe();
  int code = Ok;
  try {
    const std::string& c = cfg.subcommand;
    if (c == "orbits") {
      code = detail::cmd_orbits(cfg, report);
    } else if (c == "canonical") {
      code = detail::cmd_canonical(cfg, report);
    } else if (c == "type-image") {
      code = detail::cmd_type_image(cfg, report);
    } else if (c == "sat") {
      code = detail::cmd_sat(cfg, report, false);
    } else if (c == "sat1") {
      code = detail::cmd_sat1(cfg, report);
    } else if (c == "sat-mod") {
      code = detail::cmd_sat(cfg, report, true);
    } else if (c == "proj-hom") {
      code = detail::cmd_proj_hom(cfg, report);
    } else if (c == "lift") {
      code = detail::cmd_lift(cfg, report);
    } else if (c == "analyze") {
      code = detail::cmd_analyze(cfg, report);
    } else {
      code = detail::cmd_qdemo(cfg, report);
    }
  } catch (const CapExceeded& e) {
    report << "cap exhausted: " << e.what() << '\n';
    err << "cap exhausted: " << e.what() << '\n';
    code = CapExhausted;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return BadInput;
  } catch (const ConsistencyError& e) {
    err << "consistency failure: " << e.what() << '\n';
    return BadInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return BadInput;
  }
  report << "exit: " << code << '\n';

  if (cfg.out.empty()) {
    out << report.str();
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      err << "cannot write " << cfg.out << '\n';
      return BadInput;
    }
    file << report.str();
    out << "report written to " << cfg.out << '\n';
  }
  return code;
}

}  // namespace clonebench::cli
