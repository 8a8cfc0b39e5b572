#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "clonebench/error.hpp"
#include "clonebench/finite_structure.hpp"
#include "clonebench/plmap.hpp"
#include "clonebench/rational.hpp"

namespace clonebench {

enum class SymbolicKind { PureSet, DenseLinearOrder };

/// The two homogeneous structures on the rationals handled symbolically: the pure set
/// (Q;=) and the dense linear order (Q;<). Types of k-tuples are equality patterns and
/// order patterns respectively.
struct SymbolicStructure {
  SymbolicKind kind = SymbolicKind::DenseLinearOrder;

  static SymbolicStructure dlo() { return {SymbolicKind::DenseLinearOrder}; }
  static SymbolicStructure pure_set() { return {SymbolicKind::PureSet}; }

  std::string name() const { return kind == SymbolicKind::DenseLinearOrder ? "dlo" : "pureset"; }

  int type_arity() const { return 2; }
};

/// DenseLinearOrder: rank vector (rank of each coordinate among the distinct values).
/// PureSet: restricted growth string (label of each coordinate's equality block in
/// order of first occurrence).
struct Pattern {
  SymbolicKind kind = SymbolicKind::DenseLinearOrder;
  std::vector<int> code;

  int k() const { return static_cast<int>(code.size()); }

  // DLO: "x2 < x1 = x3"; PureSet: "{{1,2},{3}}"
  std::string to_string() const {
    std::ostringstream os;
    if (kind == SymbolicKind::DenseLinearOrder) {
      int t = code.empty() ? 0 : *std::max_element(code.begin(), code.end()) + 1;
      for (int r = 0; r < t; ++r) {
        if (r > 0) os << " < ";
        bool first = true;
        for (int i = 0; i < k(); ++i) {
          if (code[i] != r) continue;
          if (!first) os << " = ";
          os << 'x' << i + 1;
          first = false;
        }
      }
    } else {
      int t = code.empty() ? 0 : *std::max_element(code.begin(), code.end()) + 1;
      os << '{';
      for (int b = 0; b < t; ++b) {
        if (b > 0) os << ',';
        os << '{';
        bool first = true;
        for (int i = 0; i < k(); ++i) {
          if (code[i] != b) continue;
          if (!first) os << ',';
          os << i + 1;
          first = false;
        }
        os << '}';
      }
      os << '}';
    }
    return os.str();
  }

  friend auto operator<=>(const Pattern&, const Pattern&) = default;
};

template <class T>
Pattern pattern_of(SymbolicKind kind, std::span<const T> tuple) {
  Pattern p{kind, std::vector<int>(tuple.size())};
  if (kind == SymbolicKind::DenseLinearOrder) {
    std::vector<T> sorted(tuple.begin(), tuple.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t i = 0; i < tuple.size(); ++i)
      p.code[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), tuple[i]) - sorted.begin());
  } else {
    std::vector<const T*> seen;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      auto it = std::find_if(seen.begin(), seen.end(), [&](const T* v) { return *v == tuple[i]; });
      if (it == seen.end()) {
        p.code[i] = static_cast<int>(seen.size());
        seen.push_back(&tuple[i]);
      } else {
        p.code[i] = static_cast<int>(it - seen.begin());
      }
    }
  }
  return p;
}

template <class T>
Pattern pattern_of(SymbolicKind kind, const std::vector<T>& tuple) {
  return pattern_of(kind, std::span<const T>(tuple));
}

template <class T>
Pattern pattern_of(const SymbolicStructure& s, const std::vector<T>& tuple) {
  return pattern_of(s.kind, std::span<const T>(tuple));
}

// Restricted growth strings of length n in lexicographic order.
template <class F>
void for_each_set_partition(int n, F&& visit) {
  std::vector<int> code(n, 0);
  auto rec = [&](auto&& self, int i, int blocks) -> void {
    if (i == n) {
      visit(static_cast<const std::vector<int>&>(code));
      return;
    }
    for (int b = 0; b <= blocks && b < n; ++b) {
      code[i] = b;
      self(self, i + 1, std::max(blocks, b + 1));
    }
  };
  if (n == 0) {
    visit(static_cast<const std::vector<int>&>(code));
    return;
  }
  code[0] = 0;
  rec(rec, 1, 1);
}

// Rank vectors of all weak orders on n indices: each set partition, then each order of its blocks.
template <class F>
void for_each_weak_order(int n, F&& visit) {
  std::vector<int> ranks(n);
  for_each_set_partition(n, [&](const std::vector<int>& rgs) {
    int blocks = rgs.empty() ? 0 : *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<int> order(blocks);
    std::iota(order.begin(), order.end(), 0);
    do {
      for (int i = 0; i < n; ++i) ranks[i] = order[rgs[i]];
      visit(static_cast<const std::vector<int>&>(ranks));
    } while (std::next_permutation(order.begin(), order.end()));
  });
}

/// T_k for a symbolic structure: the realizable patterns of k-tuples.
class PatternSpace {
 public:
  PatternSpace(SymbolicKind kind, int k, std::vector<std::vector<int>> codes)
      : kind_(kind), k_(k), codes_(std::move(codes)) {
    for (std::size_t i = 0; i < codes_.size(); ++i) ids_.emplace(codes_[i], static_cast<int>(i));
  }

  SymbolicKind kind() const { return kind_; }
  int k() const { return k_; }
  int size() const { return static_cast<int>(codes_.size()); }

  Pattern pattern(int id) const { return Pattern{kind_, codes_.at(id)}; }

  // The pattern's own code read as rationals: ranks for DLO, block labels for PureSet.
  std::vector<Rational> representative(int id) const {
    const auto& c = codes_.at(id);
    return std::vector<Rational>(c.begin(), c.end());
  }

  int classify(const Pattern& p) const {
    if (p.kind != kind_ || p.k() != k_) throw InputError("pattern does not belong to this type space");
    return ids_.at(p.code);
  }

  int classify(std::span<const Rational> tuple) const { return classify(pattern_of(kind_, tuple)); }
  int classify(const std::vector<Rational>& tuple) const { return classify(std::span<const Rational>(tuple)); }

 private:
  SymbolicKind kind_;
  int k_;
  std::vector<std::vector<int>> codes_;
  std::map<std::vector<int>, int> ids_;
};

inline PatternSpace enumerate_patterns(const SymbolicStructure& s, int k, const StructureCaps& caps = {}) {
  if (k < 1) throw InputError("k must be at least 1");
  if (k > caps.max_k) throw CapExceeded("k = " + std::to_string(k) + " exceeds cap " + std::to_string(caps.max_k));
  std::vector<std::vector<int>> codes;
  if (s.kind == SymbolicKind::DenseLinearOrder) {
    for_each_weak_order(k, [&](const std::vector<int>& r) { codes.push_back(r); });
    std::sort(codes.begin(), codes.end());
  } else {
    for_each_set_partition(k, [&](const std::vector<int>& r) { codes.push_back(r); });
  }
  return PatternSpace(s.kind, k, std::move(codes));
}

inline Pattern restrict_pattern(const Pattern& t, const std::vector<int>& u) {
  std::vector<int> sel;
  for (int i : u) {
    if (i < 0 || i >= t.k()) throw InputError("index out of range in type restriction");
    sel.push_back(t.code[i]);
  }
  return pattern_of(t.kind, sel);
}

inline int type_restriction(const PatternSpace& from, int t, const std::vector<int>& u, const PatternSpace& to) {
  if (t < 0 || t >= from.size()) throw InputError("type id out of range");
  if (static_cast<int>(u.size()) != to.k()) throw InputError("index map length does not match target space");
  return to.classify(restrict_pattern(from.pattern(t), u));
}

/// A permutation of Q moving finitely many points.
class FinitePermutation {
 public:
  FinitePermutation() = default;

  // Extends an injective partial map to a permutation of Q: points of the image that
  // are not in the domain are sent back to the unused domain points in sorted order.
  static FinitePermutation extend(const std::vector<std::pair<Rational, Rational>>& partial) {
    std::map<Rational, Rational> forward;
    std::set<Rational> image;
    for (const auto& [x, y] : partial) {
      auto [it, inserted] = forward.emplace(x, y);
      if (!inserted && it->second != y) throw InputError("partial map is not a function");
      if (inserted && !image.insert(y).second) throw InputError("partial map is not injective");
    }
    std::vector<Rational> free_sources, free_targets;
    for (const Rational& y : image)
      if (!forward.count(y)) free_sources.push_back(y);
    for (const auto& [x, y] : forward)
      if (!image.count(x)) free_targets.push_back(x);
    for (std::size_t i = 0; i < free_sources.size(); ++i) forward.emplace(free_sources[i], free_targets[i]);
    FinitePermutation p;
    for (auto& [x, y] : forward)
      if (x != y) p.moved_.emplace(x, y);
    return p;
  }

  Rational operator()(const Rational& x) const {
    auto it = moved_.find(x);
    return it == moved_.end() ? x : it->second;
  }

  const std::map<Rational, Rational>& moved() const { return moved_; }

 private:
  std::map<Rational, Rational> moved_;
};

/// An automorphism of one of the symbolic structures: increasing PLMaps for (Q;<),
/// finitely supported permutations for (Q;=).
class RationalAutomorphism {
 public:
  RationalAutomorphism(PLMap m) : body_(std::move(m)) {}
  RationalAutomorphism(FinitePermutation p) : body_(std::move(p)) {}

  Rational operator()(const Rational& x) const {
    return std::visit([&](const auto& f) { return f(x); }, body_);
  }

  bool is_plmap() const { return std::holds_alternative<PLMap>(body_); }
  const PLMap& plmap() const { return std::get<PLMap>(body_); }
  const FinitePermutation& permutation() const { return std::get<FinitePermutation>(body_); }

  // Breakpoint list for PLMaps, moved points for permutations.
  std::string describe() const {
    std::ostringstream os;
    if (is_plmap()) {
      const PLMap& m = plmap();
      os << "plmap [";
      bool first = true;
      for (const auto& [x, y] : m.breakpoint_values()) {
        os << (first ? "" : " ") << '(' << to_string(x) << " -> " << to_string(y) << ')';
        first = false;
      }
      os << ']';
    } else {
      os << "perm {";
      bool first = true;
      for (const auto& [x, y] : permutation().moved()) {
        os << (first ? "" : ", ") << to_string(x) << " -> " << to_string(y);
        first = false;
      }
      os << '}';
    }
    return os.str();
  }

 private:
  std::variant<PLMap, FinitePermutation> body_;
};

/// An automorphism sending a_i to b_i for all i, when a and b have the same type.
inline std::optional<RationalAutomorphism> witness_partial_automorphism(const SymbolicStructure& s,
                                                                        const std::vector<Rational>& a,
                                                                        const std::vector<Rational>& b) {
  if (a.size() != b.size()) return std::nullopt;
  if (pattern_of(s, a) != pattern_of(s, b)) return std::nullopt;
  std::vector<std::pair<Rational, Rational>> points;
  for (std::size_t i = 0; i < a.size(); ++i) points.emplace_back(a[i], b[i]);
  if (s.kind == SymbolicKind::DenseLinearOrder) return RationalAutomorphism(PLMap::interpolate(std::move(points)));
  return RationalAutomorphism(FinitePermutation::extend(points));
}

}  // namespace clonebench
