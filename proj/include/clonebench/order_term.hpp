#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clonebench/error.hpp"
#include "clonebench/plmap.hpp"
#include "clonebench/rational.hpp"
#include "clonebench/term.hpp"

namespace clonebench {

using Column = std::vector<Rational>;

/// An operation on the rationals written over the basis {selectors, min, max, lex,
/// PLMap application}. Immutable; subterms are shared.
class OrderTerm {
 public:
  enum class Kind { Var, Min, Max, Lex, Map };

  static OrderTerm var(int index) {
    if (index < 0) throw InputError("negative variable index");
    return OrderTerm(std::make_shared<Node>(Node{Kind::Var, index, {}, {}, nullptr}));
  }
  static OrderTerm min(OrderTerm a, OrderTerm b) { return binary(Kind::Min, std::move(a), std::move(b)); }
  static OrderTerm max(OrderTerm a, OrderTerm b) { return binary(Kind::Max, std::move(a), std::move(b)); }
  static OrderTerm lex(OrderTerm a, OrderTerm b) { return binary(Kind::Lex, std::move(a), std::move(b)); }
  static OrderTerm map(std::string name, PLMap m, OrderTerm a) {
    return OrderTerm(std::make_shared<Node>(
        Node{Kind::Map, -1, {std::move(a)}, std::move(name), std::make_shared<const PLMap>(std::move(m))}));
  }

  Kind kind() const { return node_->kind; }
  int index() const { return node_->index; }
  const std::vector<OrderTerm>& children() const { return node_->children; }
  const std::string& map_name() const { return node_->map_name; }
  const PLMap& plmap() const { return *node_->map; }

  int max_variable() const {
    if (kind() == Kind::Var) return index();
    int m = -1;
    for (const OrderTerm& c : children()) m = std::max(m, c.max_variable());
    return m;
  }

  std::string to_string() const {
    switch (kind()) {
      case Kind::Var:
        return "x" + std::to_string(index() + 1);
      case Kind::Map:
        return map_name() + "(" + children()[0].to_string() + ")";
      default: {
        const char* name = kind() == Kind::Min ? "min" : kind() == Kind::Max ? "max" : "lex";
        return std::string(name) + "(" + children()[0].to_string() + "," + children()[1].to_string() + ")";
      }
    }
  }

 private:
  struct Node {
    Kind kind;
    int index;
    std::vector<OrderTerm> children;
    std::string map_name;
    std::shared_ptr<const PLMap> map;
  };

  explicit OrderTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static OrderTerm binary(Kind k, OrderTerm a, OrderTerm b) {
    return OrderTerm(std::make_shared<Node>(Node{k, -1, {std::move(a), std::move(b)}, {}, nullptr}));
  }

  std::shared_ptr<const Node> node_;
};

// Replaces variable x_i by replacements[i].
inline OrderTerm substitute(const OrderTerm& t, const std::vector<OrderTerm>& replacements) {
  using K = OrderTerm::Kind;
  switch (t.kind()) {
    case K::Var:
      if (t.index() >= static_cast<int>(replacements.size()))
        throw InputError("substitution misses a variable");
      return replacements[t.index()];
    case K::Map:
      return OrderTerm::map(t.map_name(), t.plmap(), substitute(t.children()[0], replacements));
    case K::Min:
      return OrderTerm::min(substitute(t.children()[0], replacements), substitute(t.children()[1], replacements));
    case K::Max:
      return OrderTerm::max(substitute(t.children()[0], replacements), substitute(t.children()[1], replacements));
    case K::Lex:
      return OrderTerm::lex(substitute(t.children()[0], replacements), substitute(t.children()[1], replacements));
  }
  throw ConsistencyError("unreachable order-term kind");
}

using PLMapTable = std::map<std::string, PLMap>;

/// Converts a parsed term: min/max/lex are binary (longer argument lists fold to the
/// right), any other symbol must name a unary PLMap.
inline OrderTerm order_term_from(const Term& t, const PLMapTable& maps) {
  if (t.is_variable()) return OrderTerm::var(t.index());
  std::vector<OrderTerm> args;
  for (const Term& a : t.args()) args.push_back(order_term_from(a, maps));
  const std::string& s = t.symbol();
  if (s == "min" || s == "max" || s == "lex") {
    if (args.size() < 2) throw InputError(s + " needs at least two arguments");
    OrderTerm acc = args.back();
    for (std::size_t i = args.size() - 1; i-- > 0;) {
      acc = s == "min" ? OrderTerm::min(args[i], acc) : s == "max" ? OrderTerm::max(args[i], acc)
                                                               : OrderTerm::lex(args[i], acc);
    }
    return acc;
  }
  auto it = maps.find(s);
  if (it == maps.end()) throw InputError("unknown order-term symbol '" + s + "'");
  if (args.size() != 1) throw InputError("PLMap " + s + " is unary");
  return OrderTerm::map(s, it->second, args[0]);
}

inline OrderTerm parse_order_term(std::string_view text, const PLMapTable& maps = {}) {
  return order_term_from(parse_term(text), maps);
}

namespace detail {

// Values of equal sort are compared only through operations that see nothing but their
// mutual order. Returns nullopt when min/max compares values of different sorts.
inline std::optional<std::string> value_sort(const OrderTerm& t) {
  using K = OrderTerm::Kind;
  switch (t.kind()) {
    case K::Var:
      return std::string("q");
    case K::Map: {
      auto inner = value_sort(t.children()[0]);
      if (!inner) return std::nullopt;
      return t.map_name() + "(" + *inner + ")";
    }
    case K::Lex: {
      auto a = value_sort(t.children()[0]), b = value_sort(t.children()[1]);
      if (!a || !b) return std::nullopt;
      return "lex(" + *a + "," + *b + ")";
    }
    default: {
      auto a = value_sort(t.children()[0]), b = value_sort(t.children()[1]);
      if (!a || !b || *a != *b) return std::nullopt;
      return a;
    }
  }
}

}  // namespace detail

/// True when the order pattern of the output column depends only on the joint order
/// pattern of the inputs, whatever the realization of lex.
inline bool is_pattern_determined(const OrderTerm& t) { return detail::value_sort(t).has_value(); }

/// A finite piece of an order embedding lex: (Q^2, lexicographic) -> Q, built on
/// demand. New pairs are placed between their already-realized lexicographic
/// neighbours, so the realized map stays strictly increasing and can always be
/// extended to a full embedding.
class LexRealization {
 public:
  using Pair = std::pair<Rational, Rational>;

  void realize(std::vector<Pair> pairs) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (Pair& p : pairs) {
      auto next = values_.lower_bound(p);
      if (next != values_.end() && next->first == p) continue;
      Rational v;
      if (values_.empty()) {
        v = 0;
      } else if (next == values_.begin()) {
        v = next->second - 1;
      } else if (next == values_.end()) {
        v = std::prev(next)->second + 1;
      } else {
        v = (std::prev(next)->second + next->second) / 2;
      }
      values_.emplace_hint(next, std::move(p), std::move(v));
    }
  }

  const Rational& value(const Pair& p) const {
    auto it = values_.find(p);
    if (it == values_.end()) throw ConsistencyError("lex pair not realized");
    return it->second;
  }

  std::size_t size() const { return values_.size(); }

 private:
  std::map<Pair, Rational> values_;
};

/// Evaluates t on N argument columns at once (args[i][c] is argument i in column c).
inline Column evaluate(const OrderTerm& t, const std::vector<Column>& args, LexRealization& lex) {
  using K = OrderTerm::Kind;
  switch (t.kind()) {
    case K::Var:
      if (t.index() >= static_cast<int>(args.size())) throw InputError("order term uses an unbound variable");
      return args[t.index()];
    case K::Map: {
      Column c = evaluate(t.children()[0], args, lex);
      for (Rational& v : c) v = t.plmap()(v);
      return c;
    }
    case K::Min:
    case K::Max: {
      Column a = evaluate(t.children()[0], args, lex);
      Column b = evaluate(t.children()[1], args, lex);
      for (std::size_t i = 0; i < a.size(); ++i) {
        bool take_b = t.kind() == K::Min ? b[i] < a[i] : a[i] < b[i];
        if (take_b) a[i] = std::move(b[i]);
      }
      return a;
    }
    case K::Lex: {
      Column a = evaluate(t.children()[0], args, lex);
      Column b = evaluate(t.children()[1], args, lex);
      std::vector<LexRealization::Pair> pairs;
      pairs.reserve(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) pairs.emplace_back(a[i], b[i]);
      lex.realize(pairs);
      Column out;
      out.reserve(a.size());
      for (const auto& p : pairs) out.push_back(lex.value(p));
      return out;
    }
  }
  throw ConsistencyError("unreachable order-term kind");
}

}  // namespace clonebench
