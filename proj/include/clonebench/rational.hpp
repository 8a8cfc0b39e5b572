#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <string>
#include <string_view>

#include "clonebench/error.hpp"

namespace clonebench {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den = 1) {
  return Rational(Integer(num), Integer(den));
}

inline std::string to_string(const Rational& q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

// Accepts "p", "p/q" and decimal literals such as "-3.25".
inline Rational parse_rational(std::string_view text) {
  auto bad = [&] { return InputError("invalid rational literal '" + std::string(text) + "'"); };
  if (text.empty()) throw bad();
  auto digits_ok = [](std::string_view s, bool allow_sign) {
    if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto to_int = [](std::string_view s) {
    if (!s.empty() && s[0] == '+') s.remove_prefix(1);
    return Integer(std::string(s));
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false)) throw bad();
    Integer d = to_int(den);
    if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return Rational(to_int(num), d);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    std::string_view unsigned_whole = whole;
    if (!unsigned_whole.empty() && (unsigned_whole[0] == '-' || unsigned_whole[0] == '+'))
      unsigned_whole.remove_prefix(1);
    if (frac.empty() || !digits_ok(frac, false)) throw bad();
    if (!unsigned_whole.empty() && !digits_ok(unsigned_whole, false)) throw bad();
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Integer w = unsigned_whole.empty() ? Integer(0) : to_int(unsigned_whole);
    Rational value(w * scale + to_int(frac), scale);
    return negative ? Rational(-value) : value;
  }
  if (!digits_ok(text, true)) throw bad();
  return Rational(to_int(text));
}

// A rational or one of the two infinities; interval endpoints and limits.
struct Extended {
  int infinity = 0;  // -1, 0 or +1
  Rational value;

  static Extended neg_inf() { return {-1, 0}; }
  static Extended pos_inf() { return {1, 0}; }
  static Extended finite(Rational q) { return {0, std::move(q)}; }

  bool is_finite() const { return infinity == 0; }

  friend bool operator==(const Extended& a, const Extended& b) {
    return a.infinity == b.infinity && (a.infinity != 0 || a.value == b.value);
  }
  friend std::strong_ordering operator<=>(const Extended& a, const Extended& b) {
    if (a.infinity != b.infinity) return a.infinity <=> b.infinity;
    if (a.infinity != 0) return std::strong_ordering::equal;
    if (a.value < b.value) return std::strong_ordering::less;
    if (b.value < a.value) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

inline std::string to_string(const Extended& e) {
  if (e.infinity < 0) return "-inf";
  if (e.infinity > 0) return "inf";
  return to_string(e.value);
}

inline Extended parse_extended(std::string_view text) {
  if (text == "inf" || text == "+inf") return Extended::pos_inf();
  if (text == "-inf") return Extended::neg_inf();
  return Extended::finite(parse_rational(text));
}

}  // namespace clonebench
