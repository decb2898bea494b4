#include "growcut/contour.hpp"

#include <array>

namespace growcut {

namespace {

constexpr std::array<Offset, 8> kChainDirs{{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

}  // namespace

Contour trace_boundary(const BinaryMask& mask, Point start) {
  const Extent d = mask.extent();
  if (!d.contains(start) || !mask.at(start.x, start.y))
    throw InvalidArgument("trace start is not a foreground pixel");
  auto inside = [&](int x, int y) { return d.contains(x, y) && mask.at(x, y); };

  Contour c;
  c.points.push_back(start);
  Point cur = start;
  int dir = 7;
  int first_dir = -1;
  // Each boundary pixel is entered at most 4 times; bound the walk.
  const std::size_t limit = 4 * d.area() + 8;
  while (c.chain.size() < limit) {
    const int search = (dir + 6) % 8;
    int found = -1;
    for (int k = 0; k < 8; ++k) {
      const int nd = (search + k) % 8;
      if (inside(cur.x + kChainDirs[nd].dx, cur.y + kChainDirs[nd].dy)) {
        found = nd;
        break;
      }
    }
    if (found < 0) break;  // isolated pixel
    if (first_dir < 0) {
      first_dir = found;
    } else if (cur == start && found == first_dir) {
      break;
    }
    c.chain.push_back(static_cast<std::uint8_t>(found));
    cur = {cur.x + kChainDirs[found].dx, cur.y + kChainDirs[found].dy};
    dir = found;
    c.points.push_back(cur);
  }
  // The closing step lands back on start; keep it only in the chain.
  if (c.points.size() > 1 && c.points.back() == start) c.points.pop_back();
  return c;
}

std::vector<Contour> outer_contours(const BinaryMask& mask) {
  const Extent d = mask.extent();
  std::vector<std::uint8_t> seen(d.area(), 0);
  std::vector<Contour> out;
  std::vector<Point> stack;
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) {
      if (!mask.at(x, y) || seen[d.index(x, y)]) continue;
      out.push_back(trace_boundary(mask, {x, y}));
      // Mark the whole component so it is traced once.
      seen[d.index(x, y)] = 1;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        for (const auto& o : kMooreOffsets) {
          const int nx = p.x + o.dx, ny = p.y + o.dy;
          if (d.contains(nx, ny) && mask.at(nx, ny) && !seen[d.index(nx, ny)]) {
            seen[d.index(nx, ny)] = 1;
            stack.push_back({nx, ny});
          }
        }
      }
    }
  }
  return out;
}

double contour_length(const Contour& c) {
  if (c.chain.empty()) return 0.0;
  std::size_t even = 0, odd = 0, corners = 0;
  for (std::size_t i = 0; i < c.chain.size(); ++i) {
    (c.chain[i] % 2 == 0 ? even : odd) += 1;
    if (c.chain[i] != c.chain[(i + 1) % c.chain.size()]) ++corners;
  }
  return 0.980 * static_cast<double>(even) + 1.406 * static_cast<double>(odd) -
         0.091 * static_cast<double>(corners);
}

std::vector<Point> boundary_polyline(const BinaryMask& mask) {
  const auto contours = outer_contours(mask);
  const Contour* best = nullptr;
  for (const auto& c : contours)
    if (!best || c.chain.size() > best->chain.size()) best = &c;
  if (!best) return {};
  return best->points;
}

}  // namespace growcut
