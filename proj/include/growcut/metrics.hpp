#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "growcut/image.hpp"

namespace growcut::metrics {

struct ShapeStats {
  std::size_t area = 0;
  double perimeter = 0.0;
  /// 4*pi*area / perimeter^2; 0 when the perimeter is 0 (isolated pixels).
  double form_factor = 0.0;
  std::size_t convex_area = 0;
  double solidity = 0.0;
  int feret_x = 0;
  int feret_y = 0;
};

/// Area, contour perimeter, form factor, solidity and axis-aligned Feret
/// extents. Perimeter sums the corrected outer-contour length of every
/// 8-connected component. Throws InvalidArgument on an empty mask.
ShapeStats shape_stats(const BinaryMask& mask);

/// Pixel count of the filled convex hull of foreground pixel centers.
std::size_t convex_area(const BinaryMask& mask);

struct Confusion {
  std::size_t tp = 0;  ///< F_Seg and F_GT
  std::size_t fp = 0;  ///< F_Seg and B_GT
  std::size_t tn = 0;  ///< B_Seg and B_GT
  std::size_t fn = 0;  ///< B_Seg and F_GT
};

Confusion confusion(const BinaryMask& seg, const BinaryMask& gt);

struct OverlapStats {
  Confusion counts;
  double dsc = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double bac = 0.0;
};

/// Dice, sensitivity, specificity and balanced accuracy from the confusion
/// counts. A rate whose denominator is zero is reported as 1 (nothing to
/// miss). Throws InvalidArgument on a size mismatch or when both masks are
/// empty.
OverlapStats overlap_stats(const BinaryMask& seg, const BinaryMask& gt);

double balanced_accuracy(double sensitivity, double specificity) noexcept;

/// Histogram: increasing-run length -> number of runs.
struct SlopeSpectrum {
  std::map<int, std::size_t> bins;

  friend bool operator==(const SlopeSpectrum&, const SlopeSpectrum&) = default;
};

/// Splits every row into maximal horizontal stretches of mask pixels, breaks
/// each stretch's intensities into maximal strictly increasing runs and
/// counts the runs of length >= 2. Throws InvalidArgument on an empty mask.
SlopeSpectrum slope_spectrum(const GrayImage& img, const BinaryMask& mask);

struct WilcoxonResult {
  double p_value = 1.0;
  bool reject = false;
  /// Sum of ranks of the positive differences.
  double w_plus = 0.0;
  /// Pairs left after dropping zero differences.
  std::size_t n = 0;
  bool exact = true;
};

/// Two-sided Wilcoxon signed-rank test of a against b. Zero differences are
/// dropped, ties get average ranks. Exact null distribution for n <= 25,
/// normal approximation with tie and continuity correction above.
/// All-zero differences give p = 1. Throws InvalidArgument on unequal or
/// empty inputs.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    double alpha = 0.05);

inline constexpr std::size_t kWilcoxonExactLimit = 25;

/// Paired Wilcoxon over the union of bins (missing bins count 0).
WilcoxonResult compare_spectra(const SlopeSpectrum& seg, const SlopeSpectrum& gt,
                               double alpha = 0.05);

/// |1 - seg / gt|. Throws InvalidArgument when gt == 0.
double relative_error(double metric_seg, double metric_gt);

/// Metric names in report order.
inline constexpr std::array<const char*, 6> kShapeMetricNames{
    "form_factor", "area", "perimeter", "feret_x", "feret_y", "solidity"};

double shape_metric(const ShapeStats& s, std::string_view name);

struct MetricsReport {
  ShapeStats shape;     ///< of the segmentation (zeros when it is empty)
  ShapeStats gt_shape;  ///< of the ground truth
  OverlapStats overlap;
  /// Shape-metric relative errors; a metric whose ground-truth value is 0
  /// has no entry.
  std::map<std::string, double> relative_errors;
  double ssp_pvalue = 1.0;
  bool ssp_reject = false;
};

/// Full comparison of a segmentation against ground truth on `img`.
MetricsReport evaluate(const GrayImage& img, const BinaryMask& seg, const BinaryMask& gt,
                       double alpha = 0.05);

}  // namespace growcut::metrics
