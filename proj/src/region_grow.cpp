#include "growcut/region_grow.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace growcut::regiongrow {

void RegionGrowConfig::validate() const {
  if (!(tolerance >= 0.0)) throw InvalidArgument("tolerance must be >= 0");
}

SegmentationResult region_grow(const GrayImage& img, const SeedSet& seeds,
                               const RegionGrowConfig& cfg) {
  cfg.validate();
  seeds.check_bounds(img.extent());
  auto fg = seeds.points(Label::Foreground);
  if (fg.empty()) throw SeedError("no foreground seed");
  std::sort(fg.begin(), fg.end(),
            [](Point a, Point b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });

  const Extent d = img.extent();
  BinaryMask mask(d);
  double sum = 0.0;
  std::size_t n = 0;
  std::vector<Point> frontier;
  for (const auto& s : fg) {
    mask.set(s.x, s.y, true);
    sum += img.at(s.x, s.y);
    ++n;
    frontier.push_back(s);
  }
  const double seed_mean = sum / static_cast<double>(n);

  // Breadth-first, one wave per iteration.
  int waves = 0;
  std::vector<Point> next;
  while (!frontier.empty()) {
    next.clear();
    for (const auto& p : frontier) {
      for (const auto& o : offsets(cfg.neighborhood)) {
        const int x = p.x + o.dx, y = p.y + o.dy;
        if (!d.contains(x, y) || mask.at(x, y)) continue;
        const double ref = cfg.criterion == Criterion::SeedMean
                               ? seed_mean
                               : sum / static_cast<double>(n);
        const double v = img.at(x, y);
        if (std::abs(v - ref) <= cfg.tolerance) {
          mask.set(x, y, true);
          sum += v;
          ++n;
          next.push_back({x, y});
        }
      }
    }
    std::swap(frontier, next);
    ++waves;
  }

  SegmentationResult result;
  result.final_grid = CellGrid(d);
  for (std::size_t i = 0; i < d.area(); ++i) {
    if (mask.bits()[i]) {
      result.final_grid.labels[i] = Label::Foreground;
      result.final_grid.strengths[i] = 1.0;
    }
  }
  result.mask = std::move(mask);
  result.iterations_used = waves;
  result.converged = true;
  return result;
}

}  // namespace growcut::regiongrow
