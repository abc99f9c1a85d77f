#include "oldauth/geometry.hpp"

#include "oldauth/error.hpp"

#include <algorithm>

namespace oldauth {

namespace {

Rational evaluate(const HalfPlane& hp, const Point& p) {
  return Rational(hp.a) * p.x + Rational(hp.b) * p.y - hp.bound;
}

// Sign of (b - a) x (c - a).
int orientation(const Point& a, const Point& b, const Point& c) {
  Rational cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return cross.sign();
}

BigInt row_floor(const BigInt& num, const BigInt& den, bool closed) {
  // largest integer x with x <= num/den (closed) or x < num/den (open)
  return closed ? floor_div(num, den) : ceil_div(num, den) - 1;
}

BigInt row_ceil(const BigInt& num, const BigInt& den, bool closed) {
  return closed ? ceil_div(num, den) : floor_div(num, den) + 1;
}

}  // namespace

int HalfPlane::side(const Point& p) const {
  // a*xn/xd + b*yn/yd - bn/bd scaled by the positive xd*yd*bd
  const BigInt& xd = p.x.den();
  const BigInt& yd = p.y.den();
  const BigInt& bd = bound.den();
  BigInt lhs = a * p.x.num() * yd * bd + b * p.y.num() * xd * bd;
  BigInt rhs = bound.num() * xd * yd;
  return lhs.compare(rhs) < 0 ? -1 : (lhs == rhs ? 0 : 1);
}

int HalfPlane::side(const BigInt& x, const BigInt& y) const {
  BigInt lhs = (a * x + b * y) * bound.den();
  int c = lhs.compare(bound.num());
  return c < 0 ? -1 : (c == 0 ? 0 : 1);
}

bool HalfPlane::contains(const Point& p) const {
  int s = side(p);
  return s < 0 || (closed && s == 0);
}

bool HalfPlane::contains(const BigInt& x, const BigInt& y) const {
  int s = side(x, y);
  return s < 0 || (closed && s == 0);
}

ConvexPolygon ConvexPolygon::box(const BigInt& x0, const BigInt& y0, const BigInt& x1,
                                 const BigInt& y1, bool half_open) {
  if (x1 < x0 || y1 < y0) throw MalformedInput("box with inverted corners");
  ConvexPolygon p;
  p.constraints_ = {
      HalfPlane::at_least(1, 0, x0),
      HalfPlane::at_least(0, 1, y0),
      half_open ? HalfPlane::below(1, 0, x1) : HalfPlane::at_most(1, 0, x1),
      half_open ? HalfPlane::below(0, 1, y1) : HalfPlane::at_most(0, 1, y1),
  };
  p.vertices_ = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  p.canonicalize();
  return p;
}

ConvexPolygon ConvexPolygon::from_vertices(std::span<const Point> points) {
  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw MalformedInput("convex hull needs three distinct points");

  // Andrew's monotone chain, counter-clockwise, collinear points dropped.
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && orientation(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && orientation(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw MalformedInput("convex hull of collinear points");

  ConvexPolygon poly;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point& p = hull[i];
    const Point& q = hull[(i + 1) % hull.size()];
    // interior on the left: (q - p) x (r - p) >= 0
    Rational a = q.y - p.y;
    Rational b = p.x - q.x;
    Rational c = a * p.x + b * p.y;
    BigInt scale = a.den() * b.den() / boost::multiprecision::gcd(a.den(), b.den());
    Rational s(scale);
    poly.constraints_.push_back(
        HalfPlane::at_most((a * s).num(), (b * s).num(), c * s));
  }
  poly.vertices_ = std::move(hull);
  poly.canonicalize();
  return poly;
}

void ConvexPolygon::canonicalize() {
  auto& v = vertices_;
  if (!v.empty()) {
    std::vector<Point> dedup;
    dedup.reserve(v.size());
    for (auto& p : v) {
      if (dedup.empty() || !(dedup.back() == p)) dedup.push_back(std::move(p));
    }
    while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
    v = std::move(dedup);
  }

  if (v.size() >= 3) {
    bool all_collinear = true;
    for (std::size_t i = 2; i < v.size() && all_collinear; ++i) {
      all_collinear = orientation(v[0], v[1], v[i]) == 0;
    }
    if (all_collinear) {
      auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      v = {*lo, *hi};
    } else {
      bool changed = true;
      while (changed && v.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < v.size(); ++i) {
          const Point& prev = v[(i + v.size() - 1) % v.size()];
          const Point& next = v[(i + 1) % v.size()];
          if (orientation(prev, v[i], next) == 0) {
            v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
            changed = true;
            break;
          }
        }
      }
    }
  }

  if (!v.empty()) {
    auto first = std::min_element(v.begin(), v.end());
    std::rotate(v.begin(), first, v.end());
  }

  // Degenerate closures may still be emptied by strict constraints. A
  // segment is non-empty iff its midpoint survives every constraint.
  if (v.size() == 1 || v.size() == 2) {
    Point probe = v.size() == 1 ? v[0]
                                : Point{(v[0].x + v[1].x) / Rational(2), (v[0].y + v[1].y) / Rational(2)};
    for (const auto& hp : constraints_) {
      if (!hp.contains(probe)) {
        v.clear();
        break;
      }
    }
  }

  if (v.empty()) {
    constraints_.clear();
    return;
  }

  // Drop constraints whose boundary line misses the closure entirely; the
  // remaining ones describe the same point set.
  std::erase_if(constraints_, [&](const HalfPlane& hp) {
    return std::all_of(v.begin(), v.end(), [&](const Point& p) { return hp.side(p) < 0; });
  });
}

std::vector<bool> ConvexPolygon::open_edges() const {
  const std::size_t n = vertices_.size();
  std::vector<bool> open(n, false);
  if (n < 2) return open;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = vertices_[i];
    const Point& q = vertices_[(i + 1) % n];
    for (const auto& hp : constraints_) {
      if (!hp.closed && hp.side(p) == 0 && hp.side(q) == 0) {
        open[i] = true;
        break;
      }
    }
  }
  return open;
}

bool ConvexPolygon::contains(const Point& p) const {
  if (empty()) return false;
  return std::all_of(constraints_.begin(), constraints_.end(),
                     [&](const HalfPlane& hp) { return hp.contains(p); });
}

bool ConvexPolygon::contains(const BigInt& x, const BigInt& y) const {
  if (empty()) return false;
  return std::all_of(constraints_.begin(), constraints_.end(),
                     [&](const HalfPlane& hp) { return hp.contains(x, y); });
}

bool operator==(const ConvexPolygon& a, const ConvexPolygon& b) {
  return a.vertices_ == b.vertices_ && a.open_edges() == b.open_edges();
}

ConvexPolygon intersect_halfplane(const ConvexPolygon& poly, const HalfPlane& hp) {
  if (poly.empty()) return poly;
  if (hp.a == 0 && hp.b == 0) throw MalformedInput("half-plane with zero normal");

  const auto& v = poly.vertices_;
  const std::size_t n = v.size();
  std::vector<Rational> f(n);
  bool all_strict_inside = true;
  bool all_outside = true;
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = evaluate(hp, v[i]);
    if (f[i].sign() >= 0) all_strict_inside = false;
    if (f[i].sign() <= 0) all_outside = false;
  }
  if (all_strict_inside) return poly;
  if (all_outside) return {};

  ConvexPolygon out;
  out.constraints_ = poly.constraints_;
  out.constraints_.push_back(hp);

  if (n == 1) {
    out.vertices_ = v;
  } else {
    out.vertices_.reserve(n + 2);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (i + 1) % n;
      const int si = f[i].sign();
      const int sj = f[j].sign();
      if (si <= 0) out.vertices_.push_back(v[i]);
      if ((si < 0 && sj > 0) || (si > 0 && sj < 0)) {
        Rational t = f[i] / (f[i] - f[j]);
        out.vertices_.push_back({v[i].x + t * (v[j].x - v[i].x), v[i].y + t * (v[j].y - v[i].y)});
      }
    }
  }
  out.canonicalize();
  return out;
}

ConvexPolygon translate(const ConvexPolygon& poly, const BigInt& dx, const BigInt& dy) {
  ConvexPolygon out = poly;
  Rational rdx(dx);
  Rational rdy(dy);
  for (auto& p : out.vertices_) {
    p.x += rdx;
    p.y += rdy;
  }
  for (auto& hp : out.constraints_) hp.bound += Rational(hp.a * dx + hp.b * dy);
  return out;
}

Rational area(const ConvexPolygon& poly) {
  const auto& v = poly.vertices();
  if (v.size() < 3) return Rational(0);
  Rational twice;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& p = v[i];
    const Point& q = v[(i + 1) % v.size()];
    twice += p.x * q.y - q.x * p.y;
  }
  if (twice.sign() < 0) twice = -twice;
  return twice / Rational(2);
}

std::pair<Rational, Rational> functional_range(const ConvexPolygon& poly, const BigInt& a,
                                               const BigInt& b) {
  if (poly.empty()) throw MalformedInput("functional_range on an empty polygon");
  Rational ra(a);
  Rational rb(b);
  std::optional<Rational> lo;
  std::optional<Rational> hi;
  for (const auto& p : poly.vertices()) {
    Rational value = ra * p.x + rb * p.y;
    if (!lo || value < *lo) lo = value;
    if (!hi || value > *hi) hi = value;
  }
  return {*lo, *hi};
}

BoundingBox bounding_box(const ConvexPolygon& poly) {
  if (poly.empty()) throw MalformedInput("bounding_box of an empty polygon");
  const auto& v = poly.vertices();
  BoundingBox box{v[0].x, v[0].x, v[0].y, v[0].y};
  for (const auto& p : v) {
    box.xmin = std::min(box.xmin, p.x);
    box.xmax = std::max(box.xmax, p.x);
    box.ymin = std::min(box.ymin, p.y);
    box.ymax = std::max(box.ymax, p.y);
  }
  return box;
}

ConvexPolygon clip_to_cell(const ConvexPolygon& poly, const DyadicCell& cell) {
  const BigInt x0 = cell.x0();
  const BigInt y0 = cell.y0();
  const BigInt side = cell.side();
  ConvexPolygon out = intersect_halfplane(poly, HalfPlane::at_least(1, 0, x0));
  out = intersect_halfplane(out, HalfPlane::below(1, 0, x0 + side));
  out = intersect_halfplane(out, HalfPlane::at_least(0, 1, y0));
  return intersect_halfplane(out, HalfPlane::below(0, 1, y0 + side));
}

std::vector<CellFragment> split_into_cells(const ConvexPolygon& poly, int m) {
  std::vector<CellFragment> out;
  if (poly.empty()) return out;
  const BigInt side = BigInt(1) << m;
  const BoundingBox bb = bounding_box(poly);
  BigInt iy_lo = std::max(BigInt(0), floor_div(bb.ymin.floor(), side));
  BigInt iy_hi = floor_div(bb.ymax.floor(), side);
  for (BigInt iy = iy_lo; iy <= iy_hi; ++iy) {
    const BigInt y0 = iy * side;
    ConvexPolygon band = intersect_halfplane(poly, HalfPlane::at_least(0, 1, y0));
    band = intersect_halfplane(band, HalfPlane::below(0, 1, y0 + side));
    if (band.empty()) continue;
    const BoundingBox rb = bounding_box(band);
    BigInt ix_lo = std::max(BigInt(0), floor_div(rb.xmin.floor(), side));
    BigInt ix_hi = floor_div(rb.xmax.floor(), side);
    for (BigInt ix = ix_lo; ix <= ix_hi; ++ix) {
      const BigInt x0 = ix * side;
      ConvexPolygon piece = intersect_halfplane(band, HalfPlane::at_least(1, 0, x0));
      piece = intersect_halfplane(piece, HalfPlane::below(1, 0, x0 + side));
      if (piece.empty()) continue;
      out.push_back({DyadicCell{ix.convert_to<std::uint64_t>(), iy.convert_to<std::uint64_t>(), m},
                     std::move(piece)});
    }
  }
  return out;
}

std::vector<DyadicCell> occupied_cells(const ConvexPolygon& poly, int m) {
  std::vector<DyadicCell> cells;
  for (auto& piece : split_into_cells(poly, m)) cells.push_back(piece.cell);
  return cells;
}

std::optional<std::pair<BigInt, BigInt>> row_range(const ConvexPolygon& poly) {
  if (poly.empty()) return std::nullopt;
  const BoundingBox bb = bounding_box(poly);
  BigInt lo = bb.ymin.ceil();
  BigInt hi = bb.ymax.floor();
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

std::optional<std::pair<BigInt, BigInt>> row_span(const ConvexPolygon& poly, const BigInt& y) {
  if (poly.empty()) return std::nullopt;
  std::optional<BigInt> lo;
  std::optional<BigInt> hi;
  for (const auto& hp : poly.constraints()) {
    // a*x <= bound - b*y, scaled by bound.den > 0
    BigInt rhs = hp.bound.num() - hp.b * y * hp.bound.den();
    if (hp.a == 0) {
      int s = rhs.sign();
      if (s < 0 || (s == 0 && !hp.closed)) return std::nullopt;
      continue;
    }
    BigInt den = hp.a * hp.bound.den();
    if (hp.a > 0) {
      BigInt cap = row_floor(rhs, den, hp.closed);
      if (!hi || cap < *hi) hi = std::move(cap);
    } else {
      BigInt cap = row_ceil(rhs, den, hp.closed);
      if (!lo || cap > *lo) lo = std::move(cap);
    }
  }
  if (!lo || !hi) {
    // Only reachable for polygons whose constraint set was pruned down to
    // horizontal lines; fall back to the closure extent.
    const BoundingBox bb = bounding_box(poly);
    if (!lo) lo = bb.xmin.ceil();
    if (!hi) hi = bb.xmax.floor();
  }
  if (*lo > *hi) return std::nullopt;
  return std::make_pair(*lo, *hi);
}

void for_each_lattice_point(const ConvexPolygon& poly,
                            const std::function<bool(const LatticePoint&)>& fn) {
  auto rows = row_range(poly);
  if (!rows) return;
  for (BigInt y = rows->first; y <= rows->second; ++y) {
    auto span = row_span(poly, y);
    if (!span) continue;
    const auto yy = y.convert_to<std::int64_t>();
    const auto x_hi = span->second.convert_to<std::int64_t>();
    for (auto x = span->first.convert_to<std::int64_t>(); x <= x_hi; ++x) {
      if (!fn(LatticePoint{x, yy})) return;
    }
  }
}

std::vector<LatticePoint> lattice_points(const ConvexPolygon& poly, std::size_t budget) {
  std::vector<LatticePoint> out;
  bool over = false;
  for_each_lattice_point(poly, [&](const LatticePoint& p) {
    if (out.size() == budget) {
      over = true;
      return false;
    }
    out.push_back(p);
    return true;
  });
  if (over) {
    throw BudgetExceeded("lattice enumeration exceeded budget of " + std::to_string(budget) +
                             " points",
                         budget);
  }
  return out;
}

BigInt lattice_count(const ConvexPolygon& poly) {
  BigInt total = 0;
  auto rows = row_range(poly);
  if (!rows) return total;
  for (BigInt y = rows->first; y <= rows->second; ++y) {
    if (auto span = row_span(poly, y)) total += span->second - span->first + 1;
  }
  return total;
}

}  // namespace oldauth
