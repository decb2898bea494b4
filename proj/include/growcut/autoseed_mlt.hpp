#pragma once

#include <optional>
#include <span>
#include <vector>

#include "growcut/growcut.hpp"

namespace growcut::mlt {

/// Multilevel-threshold schedule. Thresholds descend from the ROI maximum in
/// steps of `level`; the `depth` innermost (brightest) layers holding a
/// region are merged before the largest connected region is kept.
struct MltParams {
  int level = 10;
  int depth = 2;
  /// A layer counts only once its largest component covers this fraction of
  /// the ROI; brighter layers holding only specks are skipped.
  double min_region_fraction = 0.01;

  void validate() const;
};

/// Explicit edge-stopping diffusion on a 4-neighbor stencil with
/// diffusivity exp(-(|grad| / contrast)^2). The gradient feeding the
/// diffusivity is taken on a Gaussian-presmoothed copy so isolated noise
/// spikes are not mistaken for edges; sigma 0 gives plain Perona-Malik.
struct DiffusionParams {
  int iterations = 15;
  double time_step = 0.2;
  double contrast = 15.0;
  double presmooth_sigma = 1.0;

  void validate() const;
};

struct SeedSynthesisParams {
  /// Radius of the disc used to dilate the candidate region.
  int dilation_radius = 5;
  /// Object seeds are region pixels within this radius of the centroid.
  int centroid_radius = 2;
};

GrayImage diffuse(const GrayImage& img, const DiffusionParams& p = {});

/// Thresholds max - k*level for k = 1, 2, ... while non-negative.
std::vector<int> threshold_schedule(const GrayImage& img, const MltParams& p);

/// Super-level sets {I >= T} for each threshold, in the given order.
std::vector<BinaryMask> multilevel_threshold(const GrayImage& img, std::span<const int> thresholds);
std::vector<BinaryMask> multilevel_threshold(const GrayImage& img, const MltParams& p);

/// Connected components under 8-connectivity; label 0 is background,
/// components are numbered 1.. in raster order of their first pixel.
std::vector<int> label_components(const BinaryMask& mask, int* count = nullptr);

/// Largest 8-connected component of `mask` (first in raster order on ties).
BinaryMask largest_component(const BinaryMask& mask);

/// Union of `depth` consecutive layers, reduced to its largest component.
/// Leading layers whose largest component has fewer than `min_area` pixels
/// are skipped (all of them kept when none qualifies). Empty mask (of `roi`
/// size) when nothing is set.
BinaryMask select_mass_region(std::span<const BinaryMask> layers, Extent roi, int depth = 2,
                              std::size_t min_area = 0);

/// Disc structuring element of radius r (offsets with dx^2 + dy^2 <= r^2).
BinaryMask dilate(const BinaryMask& mask, int radius);

/// Background seeds on the outer boundary ring of the dilated region,
/// Foreground seeds near the region centroid. Throws NoCandidateError on an
/// empty region.
SeedSet synthesize_seeds(const BinaryMask& region, const SeedSynthesisParams& p = {});

/// Intermediate products, one per pipeline stage.
struct SsgcTrace {
  GrayImage diffused;
  std::vector<BinaryMask> layers;
  BinaryMask region;
  SeedSet seeds;
};

/// diffuse -> multilevel threshold -> largest region -> seed synthesis ->
/// GrowCut on the diffused image. Throws NoCandidateError ("no mass
/// candidate found") when no usable region exists.
SegmentationResult run_ssgc(const GrayImage& img, const MltParams& mlt = {},
                            const DiffusionParams& diff = {}, const GrowCutConfig& gc = {},
                            const SeedSynthesisParams& seeding = {},
                            SsgcTrace* trace = nullptr);

/// Seeds only (the front half of run_ssgc).
SeedSet generate_seeds(const GrayImage& img, const MltParams& mlt = {},
                       const DiffusionParams& diff = {}, const SeedSynthesisParams& seeding = {},
                       SsgcTrace* trace = nullptr);

}  // namespace growcut::mlt
