#pragma once

#include "growcut/growcut.hpp"

namespace growcut::regiongrow {

enum class Criterion {
  SeedMean,     ///< compare against the mean intensity of the seeds (order-independent)
  RunningMean,  ///< compare against the mean of the region grown so far
};

struct RegionGrowConfig {
  double tolerance = 32.0;
  Neighborhood neighborhood = Neighborhood::Moore8;
  Criterion criterion = Criterion::SeedMean;

  void validate() const;
};

/// Breadth-first flood from the Foreground seeds, admitting a neighbor when
/// |I - reference| <= tolerance. Background seeds are ignored. The queue is
/// seeded in raster order, which fixes the RunningMean result.
SegmentationResult region_grow(const GrayImage& img, const SeedSet& seeds,
                               const RegionGrowConfig& cfg = {});

}  // namespace growcut::regiongrow
