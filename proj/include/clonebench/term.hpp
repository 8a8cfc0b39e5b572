#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "clonebench/error.hpp"

namespace clonebench {

/// A term over a functional signature: a variable x_i (0-based index, printed x<i+1>)
/// or a function symbol applied to child terms.
class Term {
 public:
  Term() = default;

  static Term variable(int index) {
    if (index < 0) throw InputError("negative variable index");
    Term t;
    t.variable_ = index;
    return t;
  }

  static Term apply(std::string symbol, std::vector<Term> args) {
    Term t;
    t.symbol_ = std::move(symbol);
    t.args_ = std::move(args);
    return t;
  }

  bool is_variable() const { return variable_ >= 0; }
  int index() const { return variable_; }
  const std::string& symbol() const { return symbol_; }
  const std::vector<Term>& args() const { return args_; }

  // -1 for a term without variables
  int max_variable() const {
    if (is_variable()) return variable_;
    int m = -1;
    for (const Term& a : args_) m = std::max(m, a.max_variable());
    return m;
  }

  int depth() const {
    if (is_variable()) return 0;
    int d = 0;
    for (const Term& a : args_) d = std::max(d, a.depth());
    return d + 1;
  }

  void collect_symbols(std::map<std::string, int>& arities) const {
    if (is_variable()) return;
    auto [it, inserted] = arities.emplace(symbol_, static_cast<int>(args_.size()));
    if (!inserted && it->second != static_cast<int>(args_.size()))
      throw InputError("symbol " + symbol_ + " used with inconsistent arities");
    for (const Term& a : args_) a.collect_symbols(arities);
  }

  std::string to_string() const {
    if (is_variable()) return "x" + std::to_string(variable_ + 1);
    std::string s = symbol_ + "(";
    for (std::size_t i = 0; i < args_.size(); ++i) s += (i ? "," : "") + args_[i].to_string();
    return s + ")";
  }

  friend bool operator==(const Term&, const Term&) = default;

 private:
  int variable_ = -1;
  std::string symbol_;
  std::vector<Term> args_;
};

// Replaces variable x_i by replacements[i].
inline Term substitute(const Term& t, const std::vector<Term>& replacements) {
  if (t.is_variable()) {
    if (t.index() >= static_cast<int>(replacements.size())) throw InputError("substitution misses a variable");
    return replacements[t.index()];
  }
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(substitute(a, replacements));
  return Term::apply(t.symbol(), std::move(args));
}

/// Image of t under the homomorphism to the projection clone that sends each symbol
/// to its sigma-selected coordinate (0-based): the variable index t reduces to.
inline int collapse(const Term& t, const std::map<std::string, int>& sigma) {
  const Term* cur = &t;
  while (!cur->is_variable()) {
    auto it = sigma.find(cur->symbol());
    if (it == sigma.end()) throw InputError("no coordinate assigned to symbol " + cur->symbol());
    if (it->second < 0 || it->second >= static_cast<int>(cur->args().size()))
      throw InputError("coordinate out of range for symbol " + cur->symbol());
    cur = &cur->args()[it->second];
  }
  return cur->index();
}

namespace detail {

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  Term parse_all() {
    Term t = parse();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("term syntax error at column " + std::to_string(pos_ + 1) + ": " + what + " in '" +
                     std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string identifier() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a symbol or variable");
    if (std::isdigit(static_cast<unsigned char>(text_[start]))) fail("identifiers cannot start with a digit");
    return std::string(text_.substr(start, pos_ - start));
  }

  static bool is_variable_name(const std::string& id) {
    return id.size() > 1 && id[0] == 'x' &&
           std::all_of(id.begin() + 1, id.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  }

  Term parse() {
    std::string id = identifier();
    skip_space();
    bool call = pos_ < text_.size() && text_[pos_] == '(';
    if (is_variable_name(id)) {
      if (call) fail("variable " + id + " cannot be applied");
      int index = std::stoi(id.substr(1));
      if (index < 1) fail("variables are numbered from x1");
      return Term::variable(index - 1);
    }
    if (!call) fail("symbol " + id + " needs an argument list");
    ++pos_;
    std::vector<Term> args;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ')') fail("symbol " + id + " has no arguments");
    while (true) {
      args.push_back(parse());
      skip_space();
      if (pos_ >= text_.size()) fail("unterminated argument list");
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      fail("expected ',' or ')'");
    }
    return Term::apply(std::move(id), std::move(args));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Term parse_term(std::string_view text) { return detail::TermParser(text).parse_all(); }

}  // namespace clonebench
