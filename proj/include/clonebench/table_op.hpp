#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "clonebench/error.hpp"
#include "clonebench/finite_structure.hpp"

namespace clonebench {

/// An operation on {0..base-1} given by its full table, row-major with the first
/// argument most significant. Used both for concrete operations on a finite domain
/// and for induced operations on type spaces.
struct TableOp {
  int arity = 1;
  int base = 1;
  std::vector<int> values;

  static std::size_t table_size(int arity, int base) {
    std::size_t n = 1;
    for (int i = 0; i < arity; ++i) n *= static_cast<std::size_t>(base);
    return n;
  }

  template <class F>
  static TableOp from_function(int arity, int base, F&& f) {
    TableOp op{arity, base, std::vector<int>(table_size(arity, base))};
    Tuple args(arity, 0);
    for (std::size_t idx = 0; idx < op.values.size(); ++idx) {
      op.values[idx] = f(static_cast<const Tuple&>(args));
      for (int i = arity - 1; i >= 0; --i) {
        if (++args[i] < base) break;
        args[i] = 0;
      }
    }
    return op;
  }

  static TableOp selector(int arity, int i, int base) {
    if (i < 0 || i >= arity) throw InputError("selector index out of range");
    return from_function(arity, base, [i](const Tuple& a) { return a[i]; });
  }

  std::size_t index(std::span<const int> args) const {
    std::size_t idx = 0;
    for (int x : args) idx = idx * base + x;
    return idx;
  }

  int operator()(std::span<const int> args) const {
    if (static_cast<int>(args.size()) != arity) throw InputError("wrong number of arguments");
    return values[index(args)];
  }
  int operator()(const Tuple& args) const { return (*this)(std::span<const int>(args)); }

  Tuple decode(std::size_t idx) const {
    Tuple t(arity);
    for (int i = arity - 1; i >= 0; --i) {
      t[i] = static_cast<int>(idx % base);
      idx /= base;
    }
    return t;
  }

  bool is_valid() const {
    if (arity < 1 || base < 1 || values.size() != table_size(arity, base)) return false;
    for (int v : values)
      if (v < 0 || v >= base) return false;
    return true;
  }

  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < values.size(); ++i) os << (i ? " " : "") << values[i];
    return os.str();
  }

  friend bool operator==(const TableOp&, const TableOp&) = default;
};

struct TableOpHash {
  std::size_t operator()(const TableOp& op) const {
    std::size_t h = std::hash<int>()(op.arity) * 31 + std::hash<int>()(op.base);
    for (int v : op.values) h = h * 1000003u ^ std::hash<int>()(v);
    return h;
  }
};

/// f(g_1, ..., g_n), all g_i of a common arity.
inline TableOp compose(const TableOp& f, const std::vector<TableOp>& gs) {
  if (static_cast<int>(gs.size()) != f.arity) throw InputError("arity mismatch in composition");
  if (gs.empty()) throw InputError("composition needs at least one inner operation");
  const int l = gs.front().arity;
  for (const TableOp& g : gs) {
    if (g.arity != l) throw InputError("inner operations of a composition must share an arity");
    if (g.base != f.base) throw InputError("composition across different base sets");
  }
  TableOp out{l, f.base, std::vector<int>(gs.front().values.size())};
  for (std::size_t x = 0; x < out.values.size(); ++x) {
    std::size_t idx = 0;
    for (const TableOp& g : gs) idx = idx * f.base + g.values[x];
    out.values[x] = f.values[idx];
  }
  return out;
}

// Unary u applied after f.
inline TableOp post_compose(const TableOp& u, const TableOp& f) {
  if (u.arity != 1) throw InputError("post-composition needs a unary operation");
  if (u.base != f.base) throw InputError("post-composition across different base sets");
  TableOp out = f;
  for (int& v : out.values) v = u.values[v];
  return out;
}

}  // namespace clonebench
