#include "growcut/growcut.hpp"

#include <string>

namespace growcut {

namespace {

// Classical rule: cells defend and attack with their own strength and
// impose their own label.
struct ClassicRule {
  double defense(std::size_t, double theta) const noexcept { return theta; }
  double attack(std::size_t, double theta) const noexcept { return theta; }
  Label attack_label(std::size_t, Label l) const noexcept { return l; }
};

void check_dims(const GrayImage& img, const CellGrid& grid) {
  if (img.extent() != grid.dims || grid.labels.size() != grid.dims.area() ||
      grid.strengths.size() != grid.dims.area())
    throw InvalidArgument("cell grid dimensions do not match the image");
}

}  // namespace

void GrowCutConfig::validate() const {
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
  if (!(max_intensity_norm > 0.0)) throw InvalidArgument("max_intensity_norm must be > 0");
}

double attenuation_g(double x, const GrowCutConfig& cfg) {
  cfg.validate();
  if (!(x >= 0.0) || x > cfg.max_intensity_norm)
    throw InvalidArgument("attenuation argument " + std::to_string(x) + " outside [0, " +
                          std::to_string(cfg.max_intensity_norm) + "]");
  return 1.0 - x / cfg.max_intensity_norm;
}

CellGrid init_grid(const GrayImage& img, const SeedSet& seeds) {
  seeds.check_bounds(img.extent());
  CellGrid grid(img.extent());
  for (const auto& s : seeds) {
    const std::size_t i = grid.dims.index(s.at.x, s.at.y);
    grid.labels[i] = s.label;
    grid.strengths[i] = 1.0;
  }
  return grid;
}

StepStats step(const GrayImage& img, const CellGrid& in, CellGrid& out, const GrowCutConfig& cfg,
               Kernel kernel) {
  check_dims(img, in);
  cfg.validate();
  const AttenuationTable g(cfg.max_intensity_norm);
  if (kernel == Kernel::Serial)
    return step_serial_kernel(img, in, out, cfg.neighborhood, g, ClassicRule{});
  return step_parallel_kernel(img, in, out, cfg.neighborhood, g, ClassicRule{});
}

std::pair<CellGrid, std::size_t> step(const GrayImage& img, const CellGrid& grid,
                                      const GrowCutConfig& cfg) {
  CellGrid next(grid.dims);
  const auto stats = step(img, grid, next, cfg);
  return {std::move(next), stats.label_changes};
}

StepStats step_in_order(const GrayImage& img, const CellGrid& in, CellGrid& out,
                        const GrowCutConfig& cfg, std::span<const std::size_t> order) {
  check_dims(img, in);
  cfg.validate();
  if (order.size() != in.dims.area()) throw InvalidArgument("order must cover every cell");
  const AttenuationTable g(cfg.max_intensity_norm);
  return step_in_order_kernel(img, in, out, cfg.neighborhood, g, ClassicRule{}, order);
}

SegmentationResult run(const GrayImage& img, const SeedSet& seeds, const GrowCutConfig& cfg,
                       Kernel kernel) {
  cfg.validate();
  if (seeds.count(Label::Foreground) == 0) throw SeedError("no foreground seed");
  CellGrid grid = init_grid(img, seeds);
  const AttenuationTable g(cfg.max_intensity_norm);
  const auto outcome =
      iterate_to_fixed_point(grid, cfg.max_iterations, [&](const CellGrid& in, CellGrid& out) {
        if (kernel == Kernel::Serial)
          return step_serial_kernel(img, in, out, cfg.neighborhood, g, ClassicRule{});
        return step_parallel_kernel(img, in, out, cfg.neighborhood, g, ClassicRule{});
      });
  SegmentationResult result;
  result.mask = foreground_mask(grid);
  result.iterations_used = outcome.iterations;
  result.converged = outcome.converged;
  result.final_grid = std::move(grid);
  return result;
}

BinaryMask foreground_mask(const CellGrid& grid) {
  BinaryMask mask(grid.dims);
  auto bits = mask.bits();
  for (std::size_t i = 0; i < grid.labels.size(); ++i)
    bits[i] = grid.labels[i] == Label::Foreground ? 1 : 0;
  return mask;
}

}  // namespace growcut
