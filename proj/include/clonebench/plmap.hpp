#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clonebench/error.hpp"
#include "clonebench/rational.hpp"

namespace clonebench {

/// x -> (a x + b) / (c x + d) with ad - bc > 0, so increasing away from its pole.
/// Affine maps are the c == 0 case.
struct Mobius {
  Rational a{1}, b{0}, c{0}, d{1};

  static Mobius affine(Rational slope, Rational offset) { return {std::move(slope), std::move(offset), 0, 1}; }

  Rational det() const { return a * d - b * c; }
  bool is_affine() const { return c == 0; }

  std::optional<Rational> pole() const {
    if (c == 0) return std::nullopt;
    return Rational(-d / c);
  }

  Rational operator()(const Rational& x) const {
    Rational den = c * x + d;
    if (den == 0) throw ConsistencyError("Mobius map evaluated at its pole");
    return (a * x + b) / den;
  }

  Extended at(const Extended& x) const {
    if (x.is_finite()) return Extended::finite((*this)(x.value));
    if (c == 0) return x;  // a/d > 0 keeps the sign of the infinity
    return Extended::finite(a / c);
  }

  Mobius inverse() const { return Mobius{d, -b, -c, a}.normalized(); }

  // (*this) o inner
  Mobius after(const Mobius& inner) const {
    return Mobius{a * inner.a + b * inner.c, a * inner.b + b * inner.d,
                  c * inner.a + d * inner.c, c * inner.b + d * inner.d}
        .normalized();
  }

  Mobius normalized() const {
    Rational s = c != 0 ? c : d;
    if (s == 0) throw ConsistencyError("degenerate Mobius map");
    return Mobius{a / s, b / s, c / s, d / s};
  }

  friend bool operator==(const Mobius& x, const Mobius& y) {
    Mobius p = x.normalized(), q = y.normalized();
    return p.a == q.a && p.b == q.b && p.c == q.c && p.d == q.d;
  }
};

struct Piece {
  Extended lo, hi;
  Mobius map;
};

/// A strictly increasing continuous map of the rationals into themselves, given by
/// finitely many affine or Mobius pieces. Automorphisms of (Q,<) are the surjective
/// ones; bounded-range maps are proper self-embeddings.
class PLMap {
 public:
  PLMap() : pieces_{Piece{Extended::neg_inf(), Extended::pos_inf(), Mobius{}}} {}

  static PLMap identity() { return PLMap(); }

  static PLMap affine(Rational slope, Rational offset) {
    if (slope <= 0) throw InputError("affine PLMap needs a positive slope");
    return from_pieces({Piece{Extended::neg_inf(), Extended::pos_inf(),
                              Mobius::affine(std::move(slope), std::move(offset))}});
  }

  static PLMap translation(Rational offset) { return affine(1, std::move(offset)); }

  // Increasing interpolation through the given points with slope-1 tails.
  static PLMap interpolate(std::vector<std::pair<Rational, Rational>> points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.empty()) return identity();
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i].first == points[i - 1].first || points[i].second <= points[i - 1].second)
        throw InputError("interpolation points are not strictly increasing");
    }
    std::vector<Piece> pieces;
    const auto& first = points.front();
    pieces.push_back({Extended::neg_inf(), Extended::finite(first.first),
                      Mobius::affine(1, first.second - first.first)});
    for (std::size_t i = 1; i < points.size(); ++i) {
      const auto& [x0, y0] = points[i - 1];
      const auto& [x1, y1] = points[i];
      Rational slope = (y1 - y0) / (x1 - x0);
      pieces.push_back({Extended::finite(x0), Extended::finite(x1), Mobius::affine(slope, y0 - slope * x0)});
    }
    const auto& last = points.back();
    pieces.push_back({Extended::finite(last.first), Extended::pos_inf(),
                      Mobius::affine(1, last.second - last.first)});
    return from_pieces(std::move(pieces));
  }

  static PLMap from_pieces(std::vector<Piece> pieces) {
    if (pieces.empty()) throw InputError("PLMap needs at least one piece");
    if (pieces.front().lo != Extended::neg_inf() || pieces.back().hi != Extended::pos_inf())
      throw InputError("PLMap pieces must cover the rationals");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const Piece& p = pieces[i];
      if (!(p.lo < p.hi)) throw InputError("PLMap piece has an empty interval");
      if (p.map.det() <= 0) throw InputError("PLMap piece is not increasing");
      if (auto pole = p.map.pole()) {
        Extended x = Extended::finite(*pole);
        if (p.lo <= x && x <= p.hi) throw InputError("PLMap piece has a pole inside its interval");
      }
      if (i + 1 < pieces.size()) {
        const Piece& q = pieces[i + 1];
        if (p.hi != q.lo || !p.hi.is_finite()) throw InputError("PLMap pieces are not contiguous");
        if (p.map(p.hi.value) != q.map(q.lo.value)) throw InputError("PLMap is discontinuous at a breakpoint");
      }
    }
    PLMap m;
    m.pieces_ = std::move(pieces);
    m.merge_equal_neighbours();
    return m;
  }

  const std::vector<Piece>& pieces() const { return pieces_; }

  Rational operator()(const Rational& x) const { return piece_for(x).map(x); }

  Extended at(const Extended& x) const {
    if (x.infinity < 0) return pieces_.front().map.at(x);
    if (x.infinity > 0) return pieces_.back().map.at(x);
    return Extended::finite((*this)(x.value));
  }

  Extended infimum() const { return at(Extended::neg_inf()); }
  Extended supremum() const { return at(Extended::pos_inf()); }

  bool is_automorphism() const {
    return infimum() == Extended::neg_inf() && supremum() == Extended::pos_inf();
  }

  std::optional<Rational> preimage(const Rational& y) const {
    Extended target = Extended::finite(y);
    for (const Piece& p : pieces_) {
      Extended lo = p.map.at(p.lo), hi = p.map.at(p.hi);
      // limits at infinite ends are not attained
      bool above_lo = p.lo.is_finite() ? lo <= target : lo < target;
      bool below_hi = p.hi.is_finite() ? target <= hi : target < hi;
      if (above_lo && below_hi) return p.map.inverse()(y);
    }
    return std::nullopt;
  }

  std::vector<Rational> breakpoints() const {
    std::vector<Rational> out;
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) out.push_back(pieces_[i].hi.value);
    return out;
  }

  // outer o inner
  friend PLMap compose(const PLMap& outer, const PLMap& inner) {
    std::vector<Piece> out;
    for (const Piece& p : inner.pieces_) {
      Extended image_lo = p.map.at(p.lo), image_hi = p.map.at(p.hi);
      std::vector<Extended> cuts{p.lo};
      Mobius back = p.map.inverse();
      for (const Rational& b : outer.breakpoints()) {
        Extended eb = Extended::finite(b);
        if (image_lo < eb && eb < image_hi) cuts.push_back(Extended::finite(back(b)));
      }
      cuts.push_back(p.hi);
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Rational inside = interior_point(cuts[i], cuts[i + 1]);
        const Piece& q = outer.piece_for(p.map(inside));
        out.push_back({cuts[i], cuts[i + 1], q.map.after(p.map)});
      }
    }
    return from_pieces(std::move(out));
  }

  // Inverse of an automorphism.
  PLMap inverse() const {
    if (!is_automorphism()) throw InputError("only automorphisms have PLMap inverses");
    std::vector<Piece> out;
    for (const Piece& p : pieces_) out.push_back({p.map.at(p.lo), p.map.at(p.hi), p.map.inverse()});
    return from_pieces(std::move(out));
  }

  std::vector<std::pair<Rational, Rational>> breakpoint_values() const {
    std::vector<std::pair<Rational, Rational>> out;
    for (const Rational& x : breakpoints()) out.emplace_back(x, (*this)(x));
    return out;
  }

  std::string serialize() const {
    std::ostringstream os;
    for (const Piece& p : pieces_) {
      os << "piece " << to_string(p.lo) << ' ' << to_string(p.hi) << ' ';
      if (p.map.is_affine()) {
        os << "affine " << to_string(Rational(p.map.a / p.map.d)) << ' '
           << to_string(Rational(p.map.b / p.map.d));
      } else {
        os << "mobius " << to_string(p.map.a) << ' ' << to_string(p.map.b) << ' '
           << to_string(p.map.c) << ' ' << to_string(p.map.d);
      }
      os << '\n';
    }
    return os.str();
  }

  // Parses one `piece ...` line into a Piece; used by the file readers.
  static Piece parse_piece(std::string_view line) {
    std::istringstream is{std::string(line)};
    std::string keyword, lo, hi, kind;
    is >> keyword >> lo >> hi >> kind;
    if (keyword != "piece") throw InputError("expected 'piece'");
    std::vector<std::string> coeffs;
    for (std::string c; is >> c;) coeffs.push_back(c);
    Piece p{parse_extended(lo), parse_extended(hi), {}};
    if (kind == "affine") {
      if (coeffs.size() != 2) throw InputError("affine piece needs 2 coefficients");
      p.map = Mobius::affine(parse_rational(coeffs[0]), parse_rational(coeffs[1]));
    } else if (kind == "mobius") {
      if (coeffs.size() != 4) throw InputError("mobius piece needs 4 coefficients");
      p.map = Mobius{parse_rational(coeffs[0]), parse_rational(coeffs[1]), parse_rational(coeffs[2]),
                     parse_rational(coeffs[3])};
    } else {
      throw InputError("unknown piece kind '" + kind + "'");
    }
    return p;
  }

  static PLMap parse(std::string_view text) {
    std::vector<Piece> pieces;
    std::istringstream is{std::string(text)};
    int line_no = 0;
    for (std::string line; std::getline(is, line);) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        pieces.push_back(parse_piece(line));
      } catch (const ParseError&) {
        throw;
      } catch (const InputError& e) {
        throw ParseError(line_no, e.what());
      }
    }
    return from_pieces(std::move(pieces));
  }

  friend bool operator==(const PLMap& x, const PLMap& y) {
    if (x.pieces_.size() != y.pieces_.size()) return false;
    for (std::size_t i = 0; i < x.pieces_.size(); ++i) {
      const Piece &p = x.pieces_[i], &q = y.pieces_[i];
      if (p.lo != q.lo || p.hi != q.hi || !(p.map == q.map)) return false;
    }
    return true;
  }

 private:
  static Rational interior_point(const Extended& lo, const Extended& hi) {
    if (lo.is_finite() && hi.is_finite()) return (lo.value + hi.value) / 2;
    if (lo.is_finite()) return lo.value + 1;
    if (hi.is_finite()) return hi.value - 1;
    return 0;
  }

  const Piece& piece_for(const Rational& x) const {
    Extended ex = Extended::finite(x);
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), ex,
                               [](const Piece& p, const Extended& v) { return p.hi < v; });
    return *it;
  }

  void merge_equal_neighbours() {
    std::vector<Piece> merged;
    for (Piece& p : pieces_) {
      p.map = p.map.normalized();
      if (!merged.empty() && merged.back().map == p.map) {
        merged.back().hi = p.hi;
      } else {
        merged.push_back(std::move(p));
      }
    }
    pieces_ = std::move(merged);
  }

  std::vector<Piece> pieces_;
};

}  // namespace clonebench
