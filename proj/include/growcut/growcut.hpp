#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "growcut/ca_kernel.hpp"
#include "growcut/image.hpp"

namespace growcut {

/// Which step implementation drives a run. Both produce identical grids.
enum class Kernel { Parallel, Serial };

struct GrowCutConfig {
  Neighborhood neighborhood = Neighborhood::Moore8;
  int max_iterations = 10'000;
  /// Largest possible intensity difference; the denominator of g.
  double max_intensity_norm = 255.0;

  /// Throws InvalidArgument.
  void validate() const;
};

struct SegmentationResult {
  BinaryMask mask;
  int iterations_used = 0;
  /// True when the last step left every label and strength unchanged.
  bool converged = false;
  CellGrid final_grid;
};

/// g(x) = 1 - x / max_intensity_norm. Throws InvalidArgument outside
/// [0, max_intensity_norm].
double attenuation_g(double x, const GrowCutConfig& cfg);

/// Seed cells get their label at strength 1; everything else is Unlabeled
/// with strength 0.
CellGrid init_grid(const GrayImage& img, const SeedSet& seeds);

/// One synchronous GrowCut generation from `in` into `out`.
StepStats step(const GrayImage& img, const CellGrid& in, CellGrid& out, const GrowCutConfig& cfg,
               Kernel kernel = Kernel::Parallel);

/// Value-returning form: fresh grid plus the number of cells whose label changed.
std::pair<CellGrid, std::size_t> step(const GrayImage& img, const CellGrid& grid,
                                      const GrowCutConfig& cfg);

/// Serial step that visits cells in `order` (a permutation of all indices).
StepStats step_in_order(const GrayImage& img, const CellGrid& in, CellGrid& out,
                        const GrowCutConfig& cfg, std::span<const std::size_t> order);

/// Iterates `step` until a fixed point or `cfg.max_iterations`. Requires at
/// least one Foreground seed (SeedError otherwise).
SegmentationResult run(const GrayImage& img, const SeedSet& seeds, const GrowCutConfig& cfg = {},
                       Kernel kernel = Kernel::Parallel);

/// Foreground cells only; Unlabeled and Background both map to false.
BinaryMask foreground_mask(const CellGrid& grid);

}  // namespace growcut
