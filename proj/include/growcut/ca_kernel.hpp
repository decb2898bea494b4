#pragma once

// Synchronous cellular-automaton step shared by classical and fuzzy GrowCut.
//
// A Rule supplies three hooks, all evaluated on generation t:
//   double defense(std::size_t p, double theta_p)        strength p defends with
//   double attack(std::size_t q, double theta_q)         strength q attacks with
//   Label  attack_label(std::size_t q, Label l_q)        label q imposes on a win
//
// For each cell p the winner is the strongest attack g(|C_p - C_q|) * attack(q)
// that strictly exceeds defense(p); on equal attacks the earlier neighbor in
// offset order keeps the win. The winner's attack value becomes p's strength
// in generation t+1.

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <span>
#include <utility>

#include "growcut/image.hpp"

namespace growcut {

/// Grids smaller than this run the parallel kernel on one thread; a team
/// costs more than the step itself.
inline constexpr std::size_t kParallelMinCells = 4096;

struct StepStats {
  std::size_t label_changes = 0;
  std::size_t strength_changes = 0;

  [[nodiscard]] bool fixed_point() const noexcept {
    return label_changes == 0 && strength_changes == 0;
  }
};

/// g(|dI|) for every 8-bit intensity difference.
class AttenuationTable {
public:
  explicit AttenuationTable(double max_intensity_norm) {
    for (std::size_t d = 0; d < table_.size(); ++d) {
      const double v = 1.0 - static_cast<double>(d) / max_intensity_norm;
      table_[d] = v < 0.0 ? 0.0 : v;
    }
  }
  [[nodiscard]] double operator()(int a, int b) const noexcept {
    return table_[static_cast<std::size_t>(std::abs(a - b))];
  }

private:
  std::array<double, 256> table_{};
};

namespace detail {

template <class Rule>
inline void update_cell_checked(const GrayImage& img, const CellGrid& in, CellGrid& out,
                                std::span<const Offset> nbh, const AttenuationTable& g,
                                const Rule& rule, int x, int y) {
  const Extent dims = in.dims;
  const std::size_t p = dims.index(x, y);
  const int cp = img.pixels()[p];
  Label label = in.labels[p];
  double strength = in.strengths[p];
  double best = rule.defense(p, strength);
  for (const auto& o : nbh) {
    const int qx = x + o.dx;
    const int qy = y + o.dy;
    if (!dims.contains(qx, qy)) continue;
    const std::size_t q = dims.index(qx, qy);
    const double a = g(cp, img.pixels()[q]) * rule.attack(q, in.strengths[q]);
    if (a > best) {
      best = a;
      label = rule.attack_label(q, in.labels[q]);
      strength = a;
    }
  }
  out.labels[p] = label;
  out.strengths[p] = strength;
}

}  // namespace detail

/// Serial reference: plain raster scan with a bounds check on every neighbor.
template <class Rule>
StepStats step_serial_kernel(const GrayImage& img, const CellGrid& in, CellGrid& out,
                             Neighborhood n, const AttenuationTable& g, const Rule& rule) {
  out.dims = in.dims;
  out.labels.resize(in.labels.size());
  out.strengths.resize(in.strengths.size());
  const auto nbh = offsets(n);
  StepStats stats;
  for (int y = 0; y < in.dims.height; ++y) {
    for (int x = 0; x < in.dims.width; ++x) {
      detail::update_cell_checked(img, in, out, nbh, g, rule, x, y);
      const std::size_t p = in.dims.index(x, y);
      stats.label_changes += out.labels[p] != in.labels[p];
      stats.strength_changes += out.strengths[p] != in.strengths[p];
    }
  }
  return stats;
}

/// Serial reference visiting cells in an arbitrary permutation of indices.
/// Output must not depend on `order`; tests use this to check synchronicity.
template <class Rule>
StepStats step_in_order_kernel(const GrayImage& img, const CellGrid& in, CellGrid& out,
                               Neighborhood n, const AttenuationTable& g, const Rule& rule,
                               std::span<const std::size_t> order) {
  out.dims = in.dims;
  out.labels.resize(in.labels.size());
  out.strengths.resize(in.strengths.size());
  const auto nbh = offsets(n);
  StepStats stats;
  for (std::size_t p : order) {
    const int x = static_cast<int>(p % static_cast<std::size_t>(in.dims.width));
    const int y = static_cast<int>(p / static_cast<std::size_t>(in.dims.width));
    detail::update_cell_checked(img, in, out, nbh, g, rule, x, y);
    stats.label_changes += out.labels[p] != in.labels[p];
    stats.strength_changes += out.strengths[p] != in.strengths[p];
  }
  return stats;
}

/// OpenMP kernel: rows are distributed across threads; interior cells use
/// precomputed linear offsets and skip bounds checks. Bit-identical to the
/// serial kernel because each cell sees neighbors in the same order.
template <class Rule>
StepStats step_parallel_kernel(const GrayImage& img, const CellGrid& in, CellGrid& out,
                               Neighborhood n, const AttenuationTable& g, const Rule& rule) {
  out.dims = in.dims;
  out.labels.resize(in.labels.size());
  out.strengths.resize(in.strengths.size());
  const auto nbh = offsets(n);
  const int w = in.dims.width;
  const int h = in.dims.height;

  std::array<std::ptrdiff_t, 8> lin{};
  for (std::size_t k = 0; k < nbh.size(); ++k)
    lin[k] = static_cast<std::ptrdiff_t>(nbh[k].dy) * w + nbh[k].dx;
  const std::size_t nk = nbh.size();

  const std::uint8_t* px = img.pixels().data();
  const Label* lab_in = in.labels.data();
  const double* str_in = in.strengths.data();
  Label* lab_out = out.labels.data();
  double* str_out = out.strengths.data();

  std::size_t label_changes = 0;
  std::size_t strength_changes = 0;

#pragma omp parallel for schedule(static) reduction(+ : label_changes, strength_changes) \
    if (in.dims.area() >= kParallelMinCells)
  for (int y = 0; y < h; ++y) {
    const bool row_interior = y > 0 && y < h - 1;
    for (int x = 0; x < w; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                            static_cast<std::size_t>(x);
      if (row_interior && x > 0 && x < w - 1) {
        const int cp = px[p];
        Label label = lab_in[p];
        double strength = str_in[p];
        double best = rule.defense(p, strength);
        for (std::size_t k = 0; k < nk; ++k) {
          const auto q = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p) + lin[k]);
          const double a = g(cp, px[q]) * rule.attack(q, str_in[q]);
          if (a > best) {
            best = a;
            label = rule.attack_label(q, lab_in[q]);
            strength = a;
          }
        }
        lab_out[p] = label;
        str_out[p] = strength;
      } else {
        detail::update_cell_checked(img, in, out, nbh, g, rule, x, y);
      }
      label_changes += lab_out[p] != lab_in[p];
      strength_changes += str_out[p] != str_in[p];
    }
  }
  return {label_changes, strength_changes};
}

struct IterationOutcome {
  int iterations = 0;
  bool converged = false;
};

/// Double-buffered driver: applies `step(in, out)` until it reports a fixed
/// point or `max_iterations` generations have run. `grid` holds the final state.
template <class StepFn>
IterationOutcome iterate_to_fixed_point(CellGrid& grid, int max_iterations, StepFn&& step) {
  CellGrid next(grid.dims);
  IterationOutcome outcome;
  while (outcome.iterations < max_iterations) {
    const StepStats stats = step(grid, next);
    ++outcome.iterations;
    std::swap(grid, next);
    if (stats.fixed_point()) {
      outcome.converged = true;
      break;
    }
  }
  return outcome;
}

}  // namespace growcut
