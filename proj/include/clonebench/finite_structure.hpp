#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "clonebench/error.hpp"

namespace clonebench {

using Tuple = std::vector<int>;

struct Relation {
  std::string name;
  int arity = 1;
  std::set<Tuple> tuples;
};

struct StructureCaps {
  std::uint64_t max_tuples = 1'000'000;  // domain_size^k
  int max_k = 6;
};

class FiniteStructure {
 public:
  FiniteStructure(int domain_size, std::vector<Relation> relations)
      : domain_size_(domain_size), relations_(std::move(relations)) {
    if (domain_size_ < 1) throw InputError("domain size must be positive");
    std::set<std::string> names;
    for (const Relation& r : relations_) {
      if (r.arity < 1) throw InputError("relation " + r.name + " has non-positive arity");
      if (!names.insert(r.name).second) throw InputError("duplicate relation name " + r.name);
      for (const Tuple& t : r.tuples) {
        if (static_cast<int>(t.size()) != r.arity) throw InputError("arity mismatch in relation " + r.name);
        for (int x : t)
          if (x < 0 || x >= domain_size_) throw InputError("element out of range in relation " + r.name);
      }
    }
  }

  int domain_size() const { return domain_size_; }
  const std::vector<Relation>& relations() const { return relations_; }

  int max_arity() const {
    int m = 0;
    for (const Relation& r : relations_) m = std::max(m, r.arity);
    return m;
  }

  // Arity of the type spaces that determine all others. Equality is a binary
  // pattern even without relations, hence the floor of 2.
  int type_arity() const { return std::max(2, max_arity()); }

 private:
  int domain_size_;
  std::vector<Relation> relations_;
};

inline FiniteStructure parse_structure(std::string_view text) {
  std::istringstream in{std::string(text)};
  int line_no = 0;
  int domain = -1;
  std::vector<Relation> relations;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> words;
    for (std::string w; ls >> w;) words.push_back(w);
    if (words.empty()) continue;

    auto to_int = [&](const std::string& w) {
      try {
        std::size_t used = 0;
        int v = std::stoi(w, &used);
        if (used != w.size()) throw ParseError(line_no, "syntax error: '" + w + "' is not an integer");
        return v;
      } catch (const std::logic_error&) {
        throw ParseError(line_no, "syntax error: '" + w + "' is not an integer");
      }
    };

    if (words[0] == "domain") {
      if (words.size() != 2) throw ParseError(line_no, "syntax error: expected 'domain <n>'");
      if (domain != -1) throw ParseError(line_no, "domain declared twice");
      domain = to_int(words[1]);
      if (domain < 1) throw ParseError(line_no, "domain size must be positive");
    } else if (words[0] == "relation") {
      if (domain == -1) throw ParseError(line_no, "relation before domain declaration");
      if (words.size() != 3) throw ParseError(line_no, "syntax error: expected 'relation <name> <arity>'");
      int arity = to_int(words[2]);
      if (arity < 1) throw ParseError(line_no, "relation arity must be positive");
      for (const Relation& r : relations)
        if (r.name == words[1]) throw ParseError(line_no, "duplicate relation name " + words[1]);
      relations.push_back({words[1], arity, {}});
    } else {
      if (relations.empty()) throw ParseError(line_no, "syntax error: tuple outside a relation block");
      Relation& r = relations.back();
      if (static_cast<int>(words.size()) != r.arity)
        throw ParseError(line_no, "arity mismatch: relation " + r.name + " has arity " + std::to_string(r.arity));
      Tuple t;
      for (const std::string& w : words) {
        int v = to_int(w);
        if (v < 0 || v >= domain) throw ParseError(line_no, "element out of range");
        t.push_back(v);
      }
      r.tuples.insert(std::move(t));
    }
  }
  if (domain == -1) throw ParseError(line_no, "missing 'domain <n>' declaration");
  return FiniteStructure(domain, std::move(relations));
}

struct Permutation {
  std::vector<int> images;

  static Permutation identity(int n) {
    Permutation p;
    for (int i = 0; i < n; ++i) p.images.push_back(i);
    return p;
  }

  int operator()(int x) const { return images[x]; }

  Tuple apply(const Tuple& t) const {
    Tuple out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = images[t[i]];
    return out;
  }

  bool is_valid() const {
    std::vector<bool> seen(images.size(), false);
    for (int v : images) {
      if (v < 0 || v >= static_cast<int>(images.size()) || seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }

  friend auto operator<=>(const Permutation&, const Permutation&) = default;
};

/// All automorphisms, lexicographic by image sequence. Backtracking assigns images to
/// 0, 1, ... in increasing order and rejects as soon as a fully assigned relation
/// tuple leaves its relation. On a finite structure forward preservation already
/// forces the inverse to preserve the relations.
inline std::vector<Permutation> automorphisms(const FiniteStructure& s) {
  const int n = s.domain_size();
  // tuples grouped by their largest element, the point at which they become checkable
  std::vector<std::vector<std::pair<const Relation*, const Tuple*>>> by_max(n);
  for (const Relation& r : s.relations())
    for (const Tuple& t : r.tuples) by_max[*std::max_element(t.begin(), t.end())].emplace_back(&r, &t);

  std::vector<Permutation> out;
  std::vector<int> image(n, -1);
  std::vector<bool> used(n, false);
  Tuple scratch;

  auto consistent = [&](int v) {
    for (const auto& [rel, tup] : by_max[v]) {
      scratch.resize(tup->size());
      for (std::size_t i = 0; i < tup->size(); ++i) scratch[i] = image[(*tup)[i]];
      if (!rel->tuples.count(scratch)) return false;
    }
    return true;
  };

  auto search = [&](auto&& self, int v) -> void {
    if (v == n) {
      out.push_back(Permutation{image});
      return;
    }
    for (int w = 0; w < n; ++w) {
      if (used[w]) continue;
      image[v] = w;
      used[w] = true;
      if (consistent(v)) self(self, v + 1);
      used[w] = false;
    }
    image[v] = -1;
  };
  search(search, 0);
  return out;
}

/// Orbits of Aut(S) on k-tuples. Type ids are assigned in lexicographic order of the
/// orbits' least members, which serve as canonical representatives.
class OrbitSpace {
 public:
  OrbitSpace(int domain_size, int k, std::vector<int> index, std::vector<Tuple> reps,
             std::vector<std::size_t> sizes)
      : domain_size_(domain_size), k_(k), index_(std::move(index)), reps_(std::move(reps)),
        sizes_(std::move(sizes)) {}

  int k() const { return k_; }
  int domain_size() const { return domain_size_; }
  int size() const { return static_cast<int>(reps_.size()); }

  std::uint64_t encode(const Tuple& t) const {
    std::uint64_t code = 0;
    for (int x : t) code = code * domain_size_ + x;
    return code;
  }

  Tuple decode(std::uint64_t code) const {
    Tuple t(k_);
    for (int i = k_ - 1; i >= 0; --i) {
      t[i] = static_cast<int>(code % domain_size_);
      code /= domain_size_;
    }
    return t;
  }

  int classify(const Tuple& t) const {
    if (static_cast<int>(t.size()) != k_) throw InputError("tuple length does not match the type space");
    for (int x : t)
      if (x < 0 || x >= domain_size_) throw InputError("element out of range");
    return index_[encode(t)];
  }

  const Tuple& representative(int id) const { return reps_.at(id); }
  std::size_t orbit_size(int id) const { return sizes_.at(id); }
  const std::vector<int>& index() const { return index_; }

 private:
  int domain_size_;
  int k_;
  std::vector<int> index_;
  std::vector<Tuple> reps_;
  std::vector<std::size_t> sizes_;
};

inline std::uint64_t checked_power(std::uint64_t base, int exponent, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int i = 0; i < exponent; ++i) {
    if (total > cap / std::max<std::uint64_t>(base, 1)) return cap + 1;
    total *= base;
  }
  return total;
}

inline OrbitSpace orbits(const FiniteStructure& s, int k, const std::vector<Permutation>& group,
                         const StructureCaps& caps = {}) {
  if (k < 1) throw InputError("k must be at least 1");
  if (k > caps.max_k) throw CapExceeded("k = " + std::to_string(k) + " exceeds cap " + std::to_string(caps.max_k));
  const std::uint64_t total = checked_power(s.domain_size(), k, caps.max_tuples);
  if (total > caps.max_tuples)
    throw CapExceeded("domain_size^k exceeds cap " + std::to_string(caps.max_tuples));

  std::vector<int> index(total, -1);
  std::vector<Tuple> reps;
  std::vector<std::size_t> sizes;
  OrbitSpace shape(s.domain_size(), k, {}, {}, {});
  for (std::uint64_t code = 0; code < total; ++code) {
    if (index[code] != -1) continue;
    const int id = static_cast<int>(reps.size());
    Tuple t = shape.decode(code);
    std::size_t count = 0;
    for (const Permutation& g : group) {
      std::uint64_t img = shape.encode(g.apply(t));
      if (index[img] == -1) {
        index[img] = id;
        ++count;
      }
    }
    reps.push_back(std::move(t));
    sizes.push_back(count);
  }
  return OrbitSpace(s.domain_size(), k, std::move(index), std::move(reps), std::move(sizes));
}

inline OrbitSpace orbits(const FiniteStructure& s, int k, const StructureCaps& caps = {}) {
  return orbits(s, k, automorphisms(s), caps);
}

// Type of (a_{u(0)}, ..., a_{u(l-1)}) for a representative a of type t.
inline int type_restriction(const OrbitSpace& from, int t, const std::vector<int>& u, const OrbitSpace& to) {
  if (static_cast<int>(u.size()) != to.k()) throw InputError("index map length does not match target space");
  if (t < 0 || t >= from.size()) throw InputError("type id out of range");
  const Tuple& rep = from.representative(t);
  Tuple sel;
  for (int i : u) {
    if (i < 0 || i >= from.k()) throw InputError("index out of range in type restriction");
    sel.push_back(rep[i]);
  }
  return to.classify(sel);
}

}  // namespace clonebench
