#include <doctest.h>

#include <random>

#include "growcut/contour.hpp"

using namespace growcut;

namespace {

constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

bool on_boundary(const BinaryMask& m, Point p) {
  if (!m.at(p.x, p.y)) return false;
  for (int d = 0; d < 8; d += 2) {
    const int x = p.x + kDx[d], y = p.y + kDy[d];
    if (!m.extent().contains(x, y) || !m.at(x, y)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("lone pixel") {
  BinaryMask m({3, 3});
  m.set(1, 1, true);
  const auto cs = outer_contours(m);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].points == std::vector<Point>{{1, 1}});
  CHECK(cs[0].chain.empty());
  CHECK(contour_length(cs[0]) == 0.0);
}

TEST_CASE("2x2 block is traced clockwise") {
  BinaryMask m({4, 4});
  for (int y = 1; y < 3; ++y)
    for (int x = 1; x < 3; ++x) m.set(x, y, true);
  const Contour c = trace_boundary(m, {1, 1});
  CHECK(c.points == std::vector<Point>{{1, 1}, {2, 1}, {2, 2}, {1, 2}});
  CHECK(c.chain == std::vector<std::uint8_t>{0, 2, 4, 6});
  CHECK(contour_length(c) == doctest::Approx(4 * 0.980 - 4 * 0.091));
}

TEST_CASE("diagonal line uses odd codes") {
  BinaryMask m({4, 4});
  for (int i = 0; i < 4; ++i) m.set(i, i, true);
  const Contour c = trace_boundary(m, {0, 0});
  CHECK(c.chain.size() == 6);
  for (auto code : c.chain) CHECK(code % 2 == 1);
  CHECK(contour_length(c) == doctest::Approx(6 * 1.406 - 2 * 0.091));
}

TEST_CASE("one contour per component") {
  BinaryMask m({10, 6});
  m.set(0, 0, true);
  m.set(1, 1, true);  // joined diagonally
  for (int x = 5; x < 9; ++x) m.set(x, 3, true);
  const auto cs = outer_contours(m);
  REQUIRE(cs.size() == 2);
  CHECK(cs[0].points.front() == Point{0, 0});
  CHECK(cs[1].points.front() == Point{5, 3});
  CHECK(boundary_polyline(m) == cs[1].points);
  CHECK(boundary_polyline(BinaryMask({3, 3})).empty());
}

TEST_CASE("traced contours are closed chains over boundary pixels") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    BinaryMask m({2 + static_cast<int>(rng() % 12), 2 + static_cast<int>(rng() % 12)});
    for (auto& b : m.bits()) b = rng() % 3 != 0;
    for (const Contour& c : outer_contours(m)) {
      if (c.chain.empty()) {
        CHECK(c.points.size() == 1);
        continue;
      }
      REQUIRE(c.points.size() == c.chain.size());
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        CHECK(on_boundary(m, c.points[i]));
        const Point next = c.points[(i + 1) % c.points.size()];
        CHECK(next.x - c.points[i].x == kDx[c.chain[i]]);
        CHECK(next.y - c.points[i].y == kDy[c.chain[i]]);
      }
    }
  }
}
