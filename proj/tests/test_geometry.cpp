#include "doctest.h"
#include "support.hpp"

#include "oldauth/error.hpp"
#include "oldauth/geometry.hpp"
#include "oldauth/rational.hpp"

#include <random>
#include <set>

using namespace oldauth;

namespace {

std::set<std::pair<std::int64_t, std::int64_t>> brute_points(const ConvexPolygon& poly, int lo,
                                                             int hi) {
  std::set<std::pair<std::int64_t, std::int64_t>> out;
  for (int y = lo; y <= hi; ++y) {
    for (int x = lo; x <= hi; ++x) {
      if (poly.contains(BigInt(x), BigInt(y))) out.emplace(x, y);
    }
  }
  return out;
}

std::set<std::pair<std::int64_t, std::int64_t>> as_set(const std::vector<LatticePoint>& pts) {
  std::set<std::pair<std::int64_t, std::int64_t>> out;
  for (const auto& p : pts) out.emplace(p.x, p.y);
  return out;
}

// half-plane membership straight from the constraint list
bool in_constraints(const ConvexPolygon& poly, int x, int y) {
  for (const auto& hp : poly.constraints()) {
    if (!hp.contains(BigInt(x), BigInt(y))) return false;
  }
  return !poly.empty();
}

}  // namespace

TEST_CASE("floor_div and ceil_div follow mathematical rounding for all signs") {
  for (int a = -20; a <= 20; ++a) {
    for (int b : {-7, -3, -1, 1, 2, 5}) {
      const double q = static_cast<double>(a) / b;
      CHECK(floor_div(a, b) == BigInt(static_cast<long>(std::floor(q))));
      CHECK(ceil_div(a, b) == BigInt(static_cast<long>(std::ceil(q))));
    }
  }
}

TEST_CASE("rational arithmetic stays reduced") {
  Rational a(BigInt(6), BigInt(-4));
  CHECK(a.num() == -3);
  CHECK(a.den() == 2);
  CHECK(a + Rational(BigInt(3), BigInt(2)) == Rational(0));
  CHECK(a * Rational(BigInt(-2), BigInt(3)) == Rational(1));
  CHECK(a.floor() == -2);
  CHECK(a.ceil() == -1);
  CHECK(Rational(BigInt(1), BigInt(3)) < Rational(BigInt(1), BigInt(2)));
  CHECK(a.str() == "-3/2");
  CHECK_THROWS_AS(Rational(BigInt(1), BigInt(0)), MalformedInput);
}

TEST_CASE("polygon inside a cell is unchanged by clipping") {
  auto poly = ConvexPolygon::from_vertices(std::vector<Point>{{1, 1}, {5, 1}, {3, 6}});
  auto clipped = clip_to_cell(poly, DyadicCell{0, 0, 3});
  CHECK(clipped == poly);
}

TEST_CASE("polygon disjoint from a cell clips to empty") {
  auto poly = ConvexPolygon::from_vertices(std::vector<Point>{{1, 1}, {5, 1}, {3, 6}});
  CHECK(clip_to_cell(poly, DyadicCell{2, 2, 3}).empty());
}

TEST_CASE("unit square clipped to the unit cell gets open top and right edges") {
  auto square = ConvexPolygon::box(0, 0, 1, 1);
  auto clipped = clip_to_cell(square, DyadicCell{0, 0, 0});
  REQUIRE(clipped.vertices().size() == 4);
  CHECK(clipped.vertices()[0] == Point{0, 0});
  CHECK(clipped.contains(BigInt(0), BigInt(0)));
  CHECK_FALSE(clipped.contains(BigInt(1), BigInt(0)));
  CHECK_FALSE(clipped.contains(BigInt(0), BigInt(1)));
  CHECK(lattice_count(clipped) == 1);
  // edges in CCW order from (0,0): bottom, right, top, left
  CHECK(clipped.open_edges() == std::vector<bool>{false, true, true, false});
}

TEST_CASE("canonical vertex order starts at the smallest vertex and runs counter-clockwise") {
  auto a = ConvexPolygon::from_vertices(std::vector<Point>{{4, 0}, {0, 0}, {4, 3}, {0, 3}});
  auto b = ConvexPolygon::from_vertices(std::vector<Point>{{0, 3}, {4, 3}, {0, 0}, {4, 0}, {2, 0}});
  CHECK(a == b);
  REQUIRE(a.vertices().size() == 4);
  CHECK(a.vertices()[0] == Point{0, 0});
  CHECK(a.vertices()[1] == Point{4, 0});
  CHECK(a.vertices()[2] == Point{4, 3});
  CHECK(area(a) == Rational(12));
}

TEST_CASE("a strict cut along an edge leaves a degenerate or empty set correctly") {
  auto square = ConvexPolygon::box(0, 0, 4, 4);
  // x <= 0 keeps the left edge as a segment
  auto seg = intersect_halfplane(square, HalfPlane::at_most(1, 0, Rational(0)));
  CHECK(seg.degenerate());
  CHECK(lattice_count(seg) == 5);
  CHECK(area(seg) == Rational(0));
  // x < 0 leaves nothing
  CHECK(intersect_halfplane(square, HalfPlane::below(1, 0, Rational(0))).empty());
  // x + y <= 0 keeps one corner
  auto corner = intersect_halfplane(square, HalfPlane::at_most(1, 1, Rational(0)));
  CHECK(corner.vertices().size() == 1);
  CHECK(lattice_count(corner) == 1);
}

TEST_CASE("functional_range is exact over the closure") {
  auto tri = ConvexPolygon::from_vertices(std::vector<Point>{{0, 0}, {6, 0}, {0, 3}});
  auto [lo, hi] = functional_range(tri, 2, 3);
  CHECK(lo == Rational(0));
  CHECK(hi == Rational(12));
  CHECK_THROWS_AS(functional_range(ConvexPolygon{}, 1, 1), MalformedInput);
}

TEST_CASE("translate moves constraints and vertices together") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    auto poly = testing::random_small_polygon(rng, 20);
    auto moved = translate(poly, 7, -3);
    for (int y = -5; y <= 25; ++y) {
      for (int x = -5; x <= 30; ++x) {
        CHECK(poly.contains(BigInt(x), BigInt(y)) == moved.contains(BigInt(x + 7), BigInt(y - 3)));
      }
    }
    CHECK(area(poly) == area(moved));
  }
}

TEST_CASE("lattice enumeration matches brute force on random small polygons") {
  std::mt19937_64 rng(20240101);
  for (int i = 0; i < 1000; ++i) {
    auto poly = testing::random_small_polygon(rng);
    const auto brute = brute_points(poly, -1, 65);
    const auto pts = lattice_points(poly);
    CHECK(as_set(pts) == brute);
    CHECK(pts.size() == brute.size());
    CHECK(lattice_count(poly) == BigInt(brute.size()));
    CHECK(std::is_sorted(pts.begin(), pts.end(), [](const LatticePoint& a, const LatticePoint& b) {
      return std::tie(a.y, a.x) < std::tie(b.y, b.x);
    }));
  }
}

TEST_CASE("vertex closure and constraint list describe the same set") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    auto poly = testing::random_small_polygon(rng);
    for (int y = -1; y <= 65; y += 3) {
      for (int x = -1; x <= 65; x += 3) {
        CHECK(poly.contains(BigInt(x), BigInt(y)) == in_constraints(poly, x, y));
      }
    }
  }
}

TEST_CASE("clip_to_cell equals point filtering by the half-open cell") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    auto poly = testing::random_small_polygon(rng);
    const int m = static_cast<int>(rng() % 6);
    const std::uint64_t cells = std::uint64_t{64} >> m;
    DyadicCell cell{rng() % (cells + 1), rng() % (cells + 1), m};
    const std::int64_t x0 = static_cast<std::int64_t>(cell.ix << m);
    const std::int64_t y0 = static_cast<std::int64_t>(cell.iy << m);
    const std::int64_t side = std::int64_t{1} << m;
    std::set<std::pair<std::int64_t, std::int64_t>> expected;
    for (auto [x, y] : brute_points(poly, -1, 65)) {
      if (x >= x0 && x < x0 + side && y >= y0 && y < y0 + side) expected.emplace(x, y);
    }
    auto clipped = clip_to_cell(poly, cell);
    CHECK(as_set(lattice_points(clipped)) == expected);
  }
}

TEST_CASE("split_into_cells partitions the lattice points") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto poly = testing::random_small_polygon(rng);
    const int m = 1 + static_cast<int>(rng() % 5);
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    std::size_t total = 0;
    for (const auto& part : split_into_cells(poly, m)) {
      CHECK_FALSE(part.fragment.empty());
      for (const auto& p : lattice_points(part.fragment)) {
        CHECK((static_cast<std::uint64_t>(p.x) >> m) == part.cell.ix);
        CHECK((static_cast<std::uint64_t>(p.y) >> m) == part.cell.iy);
        seen.emplace(p.x, p.y);
        ++total;
      }
    }
    CHECK(total == seen.size());
    CHECK(seen == as_set(lattice_points(poly)));
  }
}

TEST_CASE("lattice_points honours its budget") {
  auto square = ConvexPolygon::box(0, 0, 9, 9);
  CHECK(lattice_points(square, 100).size() == 100);
  CHECK_THROWS_AS(lattice_points(square, 99), BudgetExceeded);
}

TEST_CASE("area is additive over a cell split") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    auto poly = testing::random_small_polygon(rng);
    Rational sum;
    for (const auto& part : split_into_cells(poly, 3)) sum += area(part.fragment);
    CHECK(sum == area(poly));
  }
}
