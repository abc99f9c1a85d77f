#pragma once

// Exact rational 2D convex geometry. Every predicate is decided with exact
// integer/rational arithmetic; nothing here ever rounds.

#include "oldauth/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace oldauth {

struct Point {
  Rational x;
  Rational y;

  friend bool operator==(const Point&, const Point&) = default;
  friend std::strong_ordering operator<=>(const Point& a, const Point& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.y <=> b.y;
  }
};

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

// {(x, y) : a*x + b*y <= bound} when closed, strict < otherwise.
struct HalfPlane {
  BigInt a;
  BigInt b;
  Rational bound;
  bool closed = true;

  static HalfPlane at_most(BigInt a, BigInt b, Rational bound) {
    return {std::move(a), std::move(b), std::move(bound), true};
  }
  static HalfPlane below(BigInt a, BigInt b, Rational bound) {
    return {std::move(a), std::move(b), std::move(bound), false};
  }
  // a*x + b*y >= bound, stored as -a*x - b*y <= -bound.
  static HalfPlane at_least(const BigInt& a, const BigInt& b, const Rational& bound) {
    return {-a, -b, -bound, true};
  }
  static HalfPlane above(const BigInt& a, const BigInt& b, const Rational& bound) {
    return {-a, -b, -bound, false};
  }

  // Sign of a*x + b*y - bound.
  int side(const Point& p) const;
  int side(const BigInt& x, const BigInt& y) const;
  bool contains(const Point& p) const;
  bool contains(const BigInt& x, const BigInt& y) const;

  friend bool operator==(const HalfPlane&, const HalfPlane&) = default;
};

// Bounded convex region given as an intersection of half-planes, together
// with the vertex chain of its closure. The vertex chain is counter-clockwise
// and starts at the lexicographically smallest vertex; collinear vertices are
// removed. A closure with 1 or 2 vertices is a degenerate point or segment
// that is still a legal, non-empty set. An empty polygon has no vertices.
class ConvexPolygon {
 public:
  ConvexPolygon() = default;

  // [x0, x1] x [y0, y1], or [x0, x1) x [y0, y1) when `half_open`.
  static ConvexPolygon box(const BigInt& x0, const BigInt& y0, const BigInt& x1, const BigInt& y1,
                           bool half_open = false);
  // Convex hull of the given points with all edges closed. Needs at least
  // three non-collinear points.
  static ConvexPolygon from_vertices(std::span<const Point> points);

  bool empty() const noexcept { return vertices_.empty(); }
  bool degenerate() const noexcept { return !vertices_.empty() && vertices_.size() < 3; }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const std::vector<HalfPlane>& constraints() const noexcept { return constraints_; }

  // One flag per edge vertices()[i] -> vertices()[i+1]: true when the edge
  // lies on the boundary line of a strict constraint and is excluded.
  std::vector<bool> open_edges() const;

  bool contains(const Point& p) const;
  bool contains(const BigInt& x, const BigInt& y) const;

  friend bool operator==(const ConvexPolygon& a, const ConvexPolygon& b);

 private:
  friend ConvexPolygon intersect_halfplane(const ConvexPolygon&, const HalfPlane&);
  friend ConvexPolygon translate(const ConvexPolygon&, const BigInt&, const BigInt&);

  void canonicalize();

  std::vector<Point> vertices_;
  std::vector<HalfPlane> constraints_;
};

ConvexPolygon intersect_halfplane(const ConvexPolygon& poly, const HalfPlane& hp);
ConvexPolygon translate(const ConvexPolygon& poly, const BigInt& dx, const BigInt& dy);

// Exact shoelace area; 0 for empty and degenerate polygons.
Rational area(const ConvexPolygon& poly);

// Exact (min, max) of a*x + b*y over the closure. Throws MalformedInput on
// an empty polygon.
std::pair<Rational, Rational> functional_range(const ConvexPolygon& poly, const BigInt& a,
                                               const BigInt& b);

struct BoundingBox {
  Rational xmin, xmax, ymin, ymax;
};
BoundingBox bounding_box(const ConvexPolygon& poly);

// Axis-aligned square [ix*2^m, (ix+1)*2^m) x [iy*2^m, (iy+1)*2^m).
struct DyadicCell {
  std::uint64_t ix = 0;
  std::uint64_t iy = 0;
  int m = 0;

  BigInt side() const { return BigInt(1) << m; }
  BigInt x0() const { return BigInt(ix) << m; }
  BigInt y0() const { return BigInt(iy) << m; }

  friend bool operator==(const DyadicCell&, const DyadicCell&) = default;
  friend auto operator<=>(const DyadicCell&, const DyadicCell&) = default;
};

ConvexPolygon clip_to_cell(const ConvexPolygon& poly, const DyadicCell& cell);

struct CellFragment {
  DyadicCell cell;
  ConvexPolygon fragment;
};

// Splits a polygon lying in the non-negative quadrant into its non-empty
// pieces on the grid of side 2^m, ordered by (iy, ix).
std::vector<CellFragment> split_into_cells(const ConvexPolygon& poly, int m);
std::vector<DyadicCell> occupied_cells(const ConvexPolygon& poly, int m);

// Integer x-range [lo, hi] of the row at height y, or nullopt if the row
// holds no lattice point.
std::optional<std::pair<BigInt, BigInt>> row_span(const ConvexPolygon& poly, const BigInt& y);

// Integer rows [ceil(ymin), floor(ymax)] that can hold lattice points.
std::optional<std::pair<BigInt, BigInt>> row_range(const ConvexPolygon& poly);

// Calls `fn` for every lattice point, ascending y then ascending x. Returning
// false from `fn` stops the scan.
void for_each_lattice_point(const ConvexPolygon& poly,
                            const std::function<bool(const LatticePoint&)>& fn);

// All lattice points in row-major order. Throws BudgetExceeded as soon as
// more than `budget` points would be produced.
std::vector<LatticePoint> lattice_points(const ConvexPolygon& poly,
                                         std::size_t budget = SIZE_MAX);

BigInt lattice_count(const ConvexPolygon& poly);

}  // namespace oldauth
