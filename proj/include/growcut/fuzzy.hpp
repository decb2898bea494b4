#pragma once

#include <span>
#include <vector>

#include "growcut/growcut.hpp"

namespace growcut::fuzzy {

/// Separable Gaussian membership fitted to the object seeds.
struct GaussianFuzzyModel {
  double x_m = 0.0;  ///< seed centroid, column
  double y_m = 0.0;  ///< seed centroid, row
  double s_x = 1.0;  ///< population std-dev of seed columns (floored)
  double s_y = 1.0;  ///< population std-dev of seed rows (floored)
  double alpha_x = 2.0;
  double alpha_y = 2.0;
};

struct FuzzyGrowCutConfig {
  Neighborhood neighborhood = Neighborhood::Moore8;
  int max_iterations = 10'000;
  double max_intensity_norm = 255.0;
  /// Tuning weight used for both axes.
  double alpha = 2.0;
  /// Lower bound for s_x, s_y; keeps the Gaussian defined for one seed or
  /// collinear seeds.
  double sigma_floor = 1.0;

  void validate() const;
};

/// Centroid and spread of the seed coordinates. Accepts Foreground seeds
/// only: throws SeedError when there are none or any Background seed is given.
GaussianFuzzyModel fit_model(const SeedSet& seeds, const FuzzyGrowCutConfig& cfg = {});

/// Object membership, in (0, 1], equal to 1 at the centroid.
double mu_obj(const GaussianFuzzyModel& model, double x, double y) noexcept;
/// Background membership, 1 - mu_obj.
double mu_bkg(const GaussianFuzzyModel& model, double x, double y) noexcept;

/// True where background membership strictly dominates.
bool outside_frontier(const GaussianFuzzyModel& model, double x, double y) noexcept;

/// Strength a cell fights with: 1 outside the frontier, otherwise `theta`.
double model_strength(const GaussianFuzzyModel& model, Point cell, double theta) noexcept;

/// Label an attacker imposes: Background outside the frontier, otherwise `l_q`.
Label model_label(const GaussianFuzzyModel& model, Point q, Label l_q) noexcept;

/// Cell nearest the centroid, rounding halves toward the lower index and
/// clamping into the grid.
Point center_cell(const GaussianFuzzyModel& model, Extent dims) noexcept;

/// Every cell Unlabeled at strength 0 except the centroid cell, which is
/// Foreground at strength 1.
CellGrid init_fuzzy(const GrayImage& img, const GaussianFuzzyModel& model);

/// Per-cell frontier flags for a grid, precomputed once per run.
std::vector<std::uint8_t> frontier_map(const GaussianFuzzyModel& model, Extent dims);

/// One synchronous fuzzy generation; `outside` comes from frontier_map.
StepStats step(const GrayImage& img, std::span<const std::uint8_t> outside, const CellGrid& in, CellGrid& out,
               const FuzzyGrowCutConfig& cfg, Kernel kernel = Kernel::Parallel);

StepStats step_in_order(const GrayImage& img, std::span<const std::uint8_t> outside,
                        const CellGrid& in, CellGrid& out, const FuzzyGrowCutConfig& cfg,
                        std::span<const std::size_t> order);

/// Fits the model, initializes at the centroid and iterates the fuzzy rule
/// to a fixed point. Requires object-only seeds.
SegmentationResult run_fuzzy(const GrayImage& img, const SeedSet& seeds,
                             const FuzzyGrowCutConfig& cfg = {}, Kernel kernel = Kernel::Parallel);

}  // namespace growcut::fuzzy
