#include "growcut/fuzzy.hpp"

#include <algorithm>
#include <cmath>

namespace growcut::fuzzy {

namespace {

// Attacks and defenses pass through the model strength; attacks from
// outside the frontier impose Background. Defender labels are never
// rewritten by the model.
struct FuzzyRule {
  const std::uint8_t* outside;

  double defense(std::size_t p, double theta) const noexcept { return outside[p] ? 1.0 : theta; }
  double attack(std::size_t q, double theta) const noexcept { return outside[q] ? 1.0 : theta; }
  Label attack_label(std::size_t q, Label l) const noexcept {
    return outside[q] ? Label::Background : l;
  }
};

void check_grid(const GrayImage& img, std::span<const std::uint8_t> outside, const CellGrid& in) {
  if (img.extent() != in.dims || in.labels.size() != in.dims.area() ||
      in.strengths.size() != in.dims.area() || outside.size() != in.dims.area())
    throw InvalidArgument("fuzzy step: grid, image and frontier map sizes differ");
}

}  // namespace

void FuzzyGrowCutConfig::validate() const {
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
  if (!(max_intensity_norm > 0.0)) throw InvalidArgument("max_intensity_norm must be > 0");
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be > 0");
  if (!(sigma_floor > 0.0)) throw InvalidArgument("sigma_floor must be > 0");
}

GaussianFuzzyModel fit_model(const SeedSet& seeds, const FuzzyGrowCutConfig& cfg) {
  cfg.validate();
  if (seeds.count(Label::Background) > 0)
    throw SeedError("fuzzy growcut takes object seeds only; background seed given");
  const auto pts = seeds.points(Label::Foreground);
  if (pts.empty()) throw SeedError("no foreground seed");

  const double n = static_cast<double>(pts.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& p : pts) {
    sx += p.x;
    sy += p.y;
  }
  GaussianFuzzyModel m;
  m.x_m = sx / n;
  m.y_m = sy / n;
  double vx = 0.0, vy = 0.0;
  for (const auto& p : pts) {
    vx += (p.x - m.x_m) * (p.x - m.x_m);
    vy += (p.y - m.y_m) * (p.y - m.y_m);
  }
  m.s_x = std::max(std::sqrt(vx / n), cfg.sigma_floor);
  m.s_y = std::max(std::sqrt(vy / n), cfg.sigma_floor);
  m.alpha_x = cfg.alpha;
  m.alpha_y = cfg.alpha;
  return m;
}

double mu_obj(const GaussianFuzzyModel& m, double x, double y) noexcept {
  const double dx = x - m.x_m;
  const double dy = y - m.y_m;
  return std::exp(-(dx * dx) / (2.0 * m.alpha_x * m.s_x * m.s_x)) *
         std::exp(-(dy * dy) / (2.0 * m.alpha_y * m.s_y * m.s_y));
}

double mu_bkg(const GaussianFuzzyModel& m, double x, double y) noexcept {
  return 1.0 - mu_obj(m, x, y);
}

bool outside_frontier(const GaussianFuzzyModel& m, double x, double y) noexcept {
  const double obj = mu_obj(m, x, y);
  return 1.0 - obj > obj;
}

double model_strength(const GaussianFuzzyModel& m, Point cell, double theta) noexcept {
  return outside_frontier(m, cell.x, cell.y) ? 1.0 : theta;
}

Label model_label(const GaussianFuzzyModel& m, Point q, Label l_q) noexcept {
  return outside_frontier(m, q.x, q.y) ? Label::Background : l_q;
}

Point center_cell(const GaussianFuzzyModel& m, Extent dims) noexcept {
  // ceil(v - 0.5) rounds to nearest with .5 going down.
  const int x = static_cast<int>(std::ceil(m.x_m - 0.5));
  const int y = static_cast<int>(std::ceil(m.y_m - 0.5));
  return {std::clamp(x, 0, dims.width - 1), std::clamp(y, 0, dims.height - 1)};
}

CellGrid init_fuzzy(const GrayImage& img, const GaussianFuzzyModel& model) {
  CellGrid grid(img.extent());
  const Point c = center_cell(model, grid.dims);
  const std::size_t i = grid.dims.index(c.x, c.y);
  grid.labels[i] = Label::Foreground;
  grid.strengths[i] = 1.0;
  return grid;
}

std::vector<std::uint8_t> frontier_map(const GaussianFuzzyModel& model, Extent dims) {
  std::vector<std::uint8_t> out(dims.area());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < dims.height; ++y)
    for (int x = 0; x < dims.width; ++x)
      out[dims.index(x, y)] = outside_frontier(model, x, y) ? 1 : 0;
  return out;
}

StepStats step(const GrayImage& img, std::span<const std::uint8_t> outside, const CellGrid& in, CellGrid& out,
               const FuzzyGrowCutConfig& cfg, Kernel kernel) {
  cfg.validate();
  check_grid(img, outside, in);
  const AttenuationTable g(cfg.max_intensity_norm);
  const FuzzyRule rule{outside.data()};
  if (kernel == Kernel::Serial) return step_serial_kernel(img, in, out, cfg.neighborhood, g, rule);
  return step_parallel_kernel(img, in, out, cfg.neighborhood, g, rule);
}

StepStats step_in_order(const GrayImage& img, std::span<const std::uint8_t> outside,
                        const CellGrid& in, CellGrid& out, const FuzzyGrowCutConfig& cfg,
                        std::span<const std::size_t> order) {
  cfg.validate();
  check_grid(img, outside, in);
  if (order.size() != in.dims.area()) throw InvalidArgument("order must cover every cell");
  const AttenuationTable g(cfg.max_intensity_norm);
  return step_in_order_kernel(img, in, out, cfg.neighborhood, g, FuzzyRule{outside.data()}, order);
}

SegmentationResult run_fuzzy(const GrayImage& img, const SeedSet& seeds,
                             const FuzzyGrowCutConfig& cfg, Kernel kernel) {
  seeds.check_bounds(img.extent());
  const GaussianFuzzyModel model = fit_model(seeds, cfg);
  const auto outside = frontier_map(model, img.extent());
  CellGrid grid = init_fuzzy(img, model);
  const AttenuationTable g(cfg.max_intensity_norm);
  const FuzzyRule rule{outside.data()};
  const auto outcome =
      iterate_to_fixed_point(grid, cfg.max_iterations, [&](const CellGrid& in, CellGrid& out) {
        if (kernel == Kernel::Serial)
          return step_serial_kernel(img, in, out, cfg.neighborhood, g, rule);
        return step_parallel_kernel(img, in, out, cfg.neighborhood, g, rule);
      });
  SegmentationResult result;
  result.mask = foreground_mask(grid);
  result.iterations_used = outcome.iterations;
  result.converged = outcome.converged;
  result.final_grid = std::move(grid);
  return result;
}

}  // namespace growcut::fuzzy
