#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "clonebench/error.hpp"
#include "clonebench/plmap.hpp"
#include "clonebench/rational.hpp"

namespace clonebench {

using Point = std::vector<Rational>;
using DataPoint = std::pair<Point, Rational>;

namespace detail {

// u << v: strictly smaller in every coordinate.
inline bool strictly_below(const Point& u, const Point& v) {
  for (std::size_t j = 0; j < u.size(); ++j)
    if (!(u[j] < v[j])) return false;
  return true;
}

inline Rational min_gap(const Point& lo, const Point& hi) {
  Rational m = hi[0] - lo[0];
  for (std::size_t j = 1; j < lo.size(); ++j) m = std::min(m, Rational(hi[j] - lo[j]));
  return m;
}

// Increasing bijection R -> (-inf, c): shift below 0, hyperbolic approach to c above.
inline Rational squash(const Rational& c, const Rational& y) {
  if (y <= 0) return c - 1 + y;
  return c - 1 / (1 + y);
}

inline Rational unsquash(const Rational& c, const Rational& z) {
  if (z <= c - 1) return z - c + 1;
  return 1 / (c - z) - 1;
}

}  // namespace detail

/// Throws ConsistencyError unless u << v implies P(u) < P(v), the condition for P to
/// extend to a polymorphism of (Q,<).
inline void check_strict_consistency(const std::vector<DataPoint>& data, std::size_t n) {
  for (const auto& [u, value] : data)
    if (u.size() != n) throw InputError("data point has the wrong arity");
  for (std::size_t x = 0; x < data.size(); ++x) {
    for (std::size_t y = 0; y < data.size(); ++y) {
      if (x == y) continue;
      const auto& [u, fu] = data[x];
      const auto& [v, fv] = data[y];
      if (u == v && fu != fv) throw ConsistencyError("inconsistent data: one point with two values");
      if (detail::strictly_below(u, v) && !(fu < fv))
        throw ConsistencyError("inconsistent data: a strictly smaller point has a value that is not smaller");
    }
  }
}

/// A strictly increasing extension of finite data below a bound c. With w the data
/// values pulled back through the squash, G(u) is w at data points and elsewhere the
/// data-free guess sum(u) clamped between a lower envelope (from data points below u)
/// and an upper envelope (from data points above u); the slope lambda keeps the two
/// envelopes apart and strictly increasing.
class MonotoneExtension {
 public:
  MonotoneExtension(std::size_t n, std::vector<DataPoint> data, Rational bound) : n_(n), bound_(std::move(bound)) {
    check_strict_consistency(data, n);
    for (auto& [u, value] : data) {
      if (!(value < bound_)) throw ConsistencyError("base value is not below the eventual bound");
      auto it = std::find_if(points_.begin(), points_.end(), [&](const Point& p) { return p == u; });
      if (it != points_.end()) continue;
      points_.push_back(u);
      w_.push_back(detail::unsquash(bound_, value));
    }
    std::optional<Rational> ratio;
    for (std::size_t p = 0; p < points_.size(); ++p)
      for (std::size_t q = 0; q < points_.size(); ++q)
        if (detail::strictly_below(points_[p], points_[q])) {
          Rational r = (w_[q] - w_[p]) / detail::min_gap(points_[p], points_[q]);
          if (!ratio || r < *ratio) ratio = r;
        }
    lambda_ = ratio ? *ratio / 2 : Rational(1);
  }

  Rational operator()(const Point& u) const {
    for (std::size_t p = 0; p < points_.size(); ++p)
      if (points_[p] == u) return detail::squash(bound_, w_[p]);
    Rational g = 0;
    for (const Rational& x : u) g += x;
    for (std::size_t q = 0; q < points_.size(); ++q)
      if (detail::strictly_below(u, points_[q])) g = std::min(g, Rational(w_[q] - lambda_ * detail::min_gap(u, points_[q])));
    for (std::size_t p = 0; p < points_.size(); ++p)
      if (detail::strictly_below(points_[p], u)) g = std::max(g, Rational(w_[p] + lambda_ * detail::min_gap(points_[p], u)));
    return detail::squash(bound_, g);
  }

  const std::vector<Point>& points() const { return points_; }
  const Rational& bound() const { return bound_; }
  const Rational& slope() const { return lambda_; }

 private:
  std::size_t n_;
  Rational bound_;
  std::vector<Point> points_;
  std::vector<Rational> w_;
  Rational lambda_;
};

/// A member of the clone of polymorphisms of (Q,<) that eventually act as an
/// automorphism applied to one coordinate: f(u) = alpha(u_i) once min(u) > a.
/// Primitive members carry their parameters; composites keep their composition term.
class QFunction {
 public:
  enum class Kind { Selector, Primitive, Unary, Composite };

  static QFunction selector(int n, int i) {
    if (n < 1 || i < 1 || i > n) throw InputError("selector index out of range");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Selector;
    node->arity = n;
    node->coordinate = i;
    node->threshold = 0;
    node->alpha = PLMap::identity();
    return QFunction(node);
  }

  int arity() const { return node_->arity; }
  Kind kind() const { return node_->kind; }
  const Rational& threshold() const { return node_->threshold; }
  const PLMap& alpha() const { return node_->alpha; }
  bool is_primitive() const { return node_->kind != Kind::Composite; }

  // Eventual coordinate, 1-based. For composites: the collapse of the composition term.
  int coordinate() const {
    if (node_->kind != Kind::Composite) return node_->coordinate;
    return node_->inner[node_->outer->coordinate() - 1].coordinate();
  }

  const QFunction& outer() const { return *node_->outer; }
  const std::vector<QFunction>& inner() const { return node_->inner; }
  const std::optional<MonotoneExtension>& base() const { return node_->base; }
  const std::optional<PLMap>& below_map() const { return node_->below; }

  Rational operator()(const Point& u) const {
    if (static_cast<int>(u.size()) != arity()) throw InputError("argument has the wrong arity");
    switch (node_->kind) {
      case Kind::Selector:
        return u[node_->coordinate - 1];
      case Kind::Unary:
        return (*node_->below)(u[0]);
      case Kind::Primitive: {
        if (*std::min_element(u.begin(), u.end()) > node_->threshold) return node_->alpha(u[node_->coordinate - 1]);
        return (*node_->base)(u);
      }
      case Kind::Composite: {
        Point inner_values;
        for (const QFunction& g : node_->inner) inner_values.push_back(g(u));
        return (*node_->outer)(inner_values);
      }
    }
    throw ConsistencyError("unreachable QFunction kind");
  }

  std::string to_string() const {
    std::ostringstream os;
    switch (node_->kind) {
      case Kind::Selector:
        os << "pi" << node_->coordinate << '/' << arity();
        break;
      case Kind::Primitive:
      case Kind::Unary:
        os << "member/" << arity() << "[i=" << node_->coordinate << ", a=" << clonebench::to_string(node_->threshold)
           << ']';
        break;
      case Kind::Composite: {
        os << node_->outer->to_string() << '(';
        for (std::size_t j = 0; j < node_->inner.size(); ++j) os << (j ? "," : "") << node_->inner[j].to_string();
        os << ')';
      }
    }
    return os.str();
  }

 private:
  struct Node {
    Kind kind = Kind::Primitive;
    int arity = 1;
    int coordinate = 1;
    Rational threshold;
    PLMap alpha;
    std::optional<MonotoneExtension> base;
    std::optional<PLMap> below;
    std::shared_ptr<const QFunction> outer;
    std::vector<QFunction> inner;
  };

  explicit QFunction(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  friend QFunction make_member(int, int, Rational, PLMap, std::vector<DataPoint>);
  friend QFunction make_unary_member(PLMap);
  friend QFunction compose_members(const QFunction&, const std::vector<QFunction>&);

  std::shared_ptr<const Node> node_;
};

/// f(u) = alpha(u_i) when every u_j > a; below, a strictly increasing extension of the
/// data with values under alpha(a).
inline QFunction make_member(int n, int i, Rational a, PLMap alpha, std::vector<DataPoint> base_data = {}) {
  if (n < 1 || i < 1 || i > n) throw InputError("eventual coordinate out of range");
  if (!alpha.is_automorphism()) throw InputError("the eventual map must be an automorphism of (Q,<)");
  for (const auto& [u, value] : base_data) {
    if (static_cast<int>(u.size()) != n) throw InputError("data point has the wrong arity");
    if (*std::min_element(u.begin(), u.end()) > a)
      throw InputError("data point lies in the eventual region above the threshold");
  }
  auto node = std::make_shared<QFunction::Node>();
  node->kind = QFunction::Kind::Primitive;
  node->arity = n;
  node->coordinate = i;
  Rational bound = alpha(a);
  node->threshold = std::move(a);
  node->alpha = std::move(alpha);
  node->base.emplace(static_cast<std::size_t>(n), std::move(base_data), std::move(bound));
  return QFunction(node);
}

/// A unary member given by one increasing map whose last piece is affine on an
/// unbounded interval: the eventual map is that affine piece.
inline QFunction make_unary_member(PLMap map) {
  const Piece& last = map.pieces().back();
  if (!last.map.is_affine()) throw InputError("the last piece of a unary member must be affine");
  auto node = std::make_shared<QFunction::Node>();
  node->kind = QFunction::Kind::Unary;
  node->arity = 1;
  node->coordinate = 1;
  node->threshold = last.lo.is_finite() ? last.lo.value : Rational(0);
  node->alpha = PLMap::affine(last.map.a / last.map.d, last.map.b / last.map.d);
  node->below = std::move(map);
  return QFunction(node);
}

/// f(g_1, ..., g_n). The eventual threshold is the least rational above which every g_j
/// is eventual and lands above f's threshold.
inline QFunction compose_members(const QFunction& f, const std::vector<QFunction>& gs) {
  if (static_cast<int>(gs.size()) != f.arity()) throw InputError("composition needs one inner member per argument");
  if (gs.empty()) throw InputError("composition needs inner members");
  const int n = gs.front().arity();
  for (const QFunction& g : gs)
    if (g.arity() != n) throw InputError("inner members of a composition must share an arity");
  auto node = std::make_shared<QFunction::Node>();
  node->kind = QFunction::Kind::Composite;
  node->arity = n;
  node->outer = std::make_shared<const QFunction>(f);
  node->inner = gs;
  Rational a = gs.front().threshold();
  for (const QFunction& g : gs) {
    a = std::max(a, g.threshold());
    a = std::max(a, g.alpha().inverse()(f.threshold()));
  }
  node->threshold = a;
  node->alpha = compose(f.alpha(), gs[f.coordinate() - 1].alpha());
  node->coordinate = node->inner[f.coordinate() - 1].coordinate();
  return QFunction(node);
}

/// The homomorphism to 1: f goes to the selector of its eventual coordinate. Computed
/// symbolically and cross-checked by moving single coordinates at a point far above
/// the threshold: only the reported coordinate may change the value.
inline int xi(const QFunction& f) {
  const int i = f.coordinate();
  const int n = f.arity();
  Point u(n);
  Rational base = f.threshold() + 100;
  for (int j = 0; j < n; ++j) u[j] = base + j + 1;
  const Rational value = f(u);
  if (value != f.alpha()(u[i - 1]))
    throw ConsistencyError("eventual value disagrees with alpha(u_i) for " + f.to_string());
  for (int j = 0; j < n; ++j) {
    Point v = u;
    v[j] += Rational(1, 3);
    bool changed = f(v) != value;
    if (changed != (j == i - 1))
      throw ConsistencyError("symbolic coordinate " + std::to_string(i) + " of " + f.to_string() +
                             " disagrees with evaluation at coordinate " + std::to_string(j + 1));
  }
  return i;
}

/// A member agreeing with P on its points and eventually following coordinate target_i.
inline QFunction extend_restriction(const std::vector<DataPoint>& p, int target_i, int n) {
  if (n < 1 || target_i < 1 || target_i > n) throw InputError("target coordinate out of range");
  check_strict_consistency(p, static_cast<std::size_t>(n));
  if (p.empty()) return make_member(n, target_i, 0, PLMap::identity());
  Rational a = p.front().first.front();
  Rational top = p.front().second;
  for (const auto& [u, value] : p) {
    for (const Rational& x : u) a = std::max(a, x);
    top = std::max(top, value);
  }
  a += 1;
  PLMap alpha = PLMap::translation(top + 1 - a);
  return make_member(n, target_i, std::move(a), std::move(alpha), p);
}

struct UniquenessReport {
  std::vector<QFunction> witnesses;   // g_1..g_n
  bool range_above_threshold = false; // from the piece descriptions
  std::size_t grid_points = 0;
  bool depends_only_on_coordinate = false;
};

/// The unary member x -> a + x + 1 (x >= 0), a + 1/(1 - x) (x < 0), whose range is (a, inf).
inline PLMap uniqueness_map(const Rational& a) {
  return PLMap::from_pieces({Piece{Extended::neg_inf(), Extended::finite(0), Mobius{-a, a + 1, -1, 1}},
                             Piece{Extended::finite(0), Extended::pos_inf(), Mobius::affine(1, a + 1)}});
}

/// With every g_j ranging above a, f(g_1(x_1), ..., g_n(x_n)) = alpha(g_i(x_i)): the
/// composite is a function of x_i alone, so every homomorphism to 1 sends f to the
/// i-th selector.
inline UniquenessReport uniqueness_witnesses(const QFunction& f) {
  if (!f.is_primitive()) throw InputError("uniqueness witnesses need a primitive member");
  const int n = f.arity();
  const int i = f.coordinate();
  UniquenessReport report;
  PLMap g = uniqueness_map(f.threshold());
  report.range_above_threshold = g.infimum() >= Extended::finite(f.threshold());
  for (int j = 0; j < n; ++j) report.witnesses.push_back(make_unary_member(g));

  const std::vector<Rational> grid{Rational(-5), Rational(-3), Rational(-2), Rational(-1), Rational(-1, 2),
                                   Rational(0),  Rational(1, 3), Rational(1), Rational(2),  Rational(7)};
  std::uint64_t total = 1;
  for (int j = 0; j < n; ++j) total = total * grid.size() > 100'000 ? 100'000 : total * grid.size();
  bool ok = true;
  std::vector<std::size_t> idx(n, 0);
  for (std::uint64_t c = 0; c < total; ++c) {
    Point images(n);
    for (int j = 0; j < n; ++j) images[j] = report.witnesses[j](Point{grid[idx[j]]});
    ok = ok && f(images) == f.alpha()(images[i - 1]);
    ++report.grid_points;
    int pos = n - 1;
    while (pos >= 0 && ++idx[pos] == grid.size()) idx[pos--] = 0;
    if (pos < 0) break;
  }
  report.depends_only_on_coordinate = ok;
  return report;
}

struct NoncontinuityReport {
  QFunction original = QFunction::selector(1, 1);
  std::vector<DataPoint> restriction;
  std::vector<QFunction> extensions;  // extension t has eventual coordinate t
  std::vector<int> xi_values;
  bool agree_on_restriction = false;
};

/// Seeded sample points with small numerators and denominators, some below and some
/// above the threshold.
inline std::vector<Point> sample_points(int n, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-12, 12), den(1, 4);
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < count) {
    Point u;
    for (int j = 0; j < n; ++j) u.emplace_back(num(rng), den(rng));
    if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(std::move(u));
  }
  return out;
}

/// A member with xi = 1 and, for every coordinate t, a member with xi = t that agrees
/// with it on a finite sample: no finite restriction determines xi.
inline NoncontinuityReport noncontinuity_demo(int n, int sample_count, std::uint64_t seed = 0) {
  if (n < 2) throw InputError("the non-continuity demo needs arity at least 2");
  if (sample_count < 0) throw InputError("sample count must be nonnegative");
  NoncontinuityReport report;
  report.original = make_member(n, 1, 0, PLMap::identity());
  for (Point& u : sample_points(n, sample_count, seed)) {
    Rational v = report.original(u);
    report.restriction.emplace_back(std::move(u), std::move(v));
  }
  bool agree = true;
  for (int t = 1; t <= n; ++t) {
    QFunction h = extend_restriction(report.restriction, t, n);
    for (const auto& [u, v] : report.restriction) agree = agree && h(u) == v;
    report.xi_values.push_back(xi(h));
    report.extensions.push_back(std::move(h));
  }
  report.agree_on_restriction = agree;
  return report;
}

/// Member file:
///   plmap <name>                 followed by `piece ...` lines
///   arity <n>
///   eventual <i> <a> <plmap name>
///   data <u_1> ... <u_n> -> <value>
inline QFunction parse_member(std::string_view text) {
  std::map<std::string, PLMap> maps;
  std::string current;
  std::vector<Piece> pieces;
  int map_line = 0;
  std::optional<int> arity;
  std::optional<std::tuple<int, Rational, std::string>> eventual;
  std::vector<DataPoint> data;
  auto close_map = [&] {
    if (current.empty()) return;
    try {
      maps.insert_or_assign(current, PLMap::from_pieces(std::move(pieces)));
    } catch (const InputError& e) {
      throw ParseError(map_line, "plmap " + current + ": " + e.what());
    }
    pieces.clear();
    current.clear();
  };
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    try {
      if (head == "piece") {
        if (current.empty()) throw InputError("piece outside a plmap block");
        pieces.push_back(PLMap::parse_piece(line));
        continue;
      }
      close_map();
      if (head == "plmap") {
        if (!(ls >> current)) throw InputError("expected 'plmap <name>'");
        map_line = line_no;
      } else if (head == "arity") {
        int n;
        if (!(ls >> n) || n < 1) throw InputError("expected 'arity <positive integer>'");
        arity = n;
      } else if (head == "eventual") {
        int i;
        std::string a, name;
        if (!(ls >> i >> a >> name)) throw InputError("expected 'eventual <i> <a> <plmap>'");
        eventual.emplace(i, parse_rational(a), name);
      } else if (head == "data") {
        std::string rest;
        std::getline(ls, rest);
        auto arrow = rest.find("->");
        if (arrow == std::string::npos) throw InputError("data row needs '->'");
        std::istringstream lhs(rest.substr(0, arrow)), rhs(rest.substr(arrow + 2));
        Point u;
        for (std::string x; lhs >> x;) u.push_back(parse_rational(x));
        std::string v, extra;
        if (!(rhs >> v) || (rhs >> extra)) throw InputError("data row needs one value");
        data.emplace_back(std::move(u), parse_rational(v));
      } else {
        throw InputError("syntax error: unexpected '" + head + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  close_map();
  if (!arity) throw InputError("member file needs an 'arity' line");
  if (!eventual) throw InputError("member file needs an 'eventual' line");
  auto& [i, a, name] = *eventual;
  auto it = maps.find(name);
  if (it == maps.end()) throw InputError("unknown plmap " + name);
  return make_member(*arity, i, a, it->second, std::move(data));
}

}  // namespace clonebench
