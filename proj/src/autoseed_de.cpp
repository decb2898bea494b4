#include "growcut/autoseed_de.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace growcut::de {

namespace {

// Portable draws from mt19937_64: the standard distributions are
// implementation-defined, which would break cross-toolchain reproducibility.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t index(std::size_t n) {
    return std::min(static_cast<std::size_t>(uniform() * static_cast<double>(n)), n - 1);
  }

private:
  std::mt19937_64 engine_;
};

Point round_to_pixel(const PointF& p, Extent dims) {
  return {std::clamp(static_cast<int>(std::lround(p.x)), 0, dims.width - 1),
          std::clamp(static_cast<int>(std::lround(p.y)), 0, dims.height - 1)};
}

// Flattened genome: x0, y0, x1, y1, ...
double fitness_of(const std::vector<double>& genome, const GrayImage& img, double w) {
  const Extent dims = img.extent();
  const std::size_t n = genome.size() / 2;
  double gray = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point px = round_to_pixel({genome[2 * i], genome[2 * i + 1]}, dims);
    gray += img.at(px.x, px.y);
  }
  const double gray_term = gray / (255.0 * static_cast<double>(n));

  double spread = 1.0;
  if (n > 1) {
    double min_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = genome[2 * i] - genome[2 * j];
        const double dy = genome[2 * i + 1] - genome[2 * j + 1];
        min_d2 = std::min(min_d2, dx * dx + dy * dy);
      }
    const double diag = std::hypot(dims.width - 1.0, dims.height - 1.0);
    spread = diag > 0.0 ? std::sqrt(min_d2) / diag : 0.0;
  }
  return w * gray_term + (1.0 - w) * spread;
}

}  // namespace

void DeParams::validate() const {
  if (points_per_solution < 1) throw InvalidArgument("points_per_solution must be >= 1");
  if (population_size < 4) throw InvalidArgument("population_size must be >= 4");
  if (generations < 0) throw InvalidArgument("generations must be >= 0");
  if (!(differential_weight > 0.0) || differential_weight > 2.0)
    throw InvalidArgument("differential weight F must be in (0, 2]");
  if (!(crossover_rate >= 0.0) || crossover_rate > 1.0)
    throw InvalidArgument("crossover rate must be in [0, 1]");
  if (!(brightness_weight >= 0.0) || brightness_weight > 1.0)
    throw InvalidArgument("brightness weight must be in [0, 1]");
}

double fitness(const std::vector<PointF>& points, const GrayImage& img, double w) {
  if (points.empty()) throw InvalidArgument("fitness of an empty solution");
  std::vector<double> genome;
  genome.reserve(points.size() * 2);
  for (const auto& p : points) {
    if (p.x < 0.0 || p.y < 0.0 || p.x > img.width() - 1.0 || p.y > img.height() - 1.0)
      throw InvalidArgument("solution point outside the ROI");
    genome.push_back(p.x);
    genome.push_back(p.y);
  }
  return fitness_of(genome, img, w);
}

double fitness(const SeedSolution& sol, const GrayImage& img, double w) {
  return fitness(sol.points, img, w);
}

SeedSolution evolve(const GrayImage& img, const DeParams& p,
                    std::vector<double>* best_per_generation) {
  p.validate();
  if (img.width() < 2 || img.height() < 2) throw InvalidArgument("ROI smaller than 2x2");

  const std::size_t np = static_cast<std::size_t>(p.population_size);
  const std::size_t dim = 2 * static_cast<std::size_t>(p.points_per_solution);
  const double hi[2] = {img.width() - 1.0, img.height() - 1.0};
  Rng rng(p.rng_seed);

  std::vector<std::vector<double>> pop(np, std::vector<double>(dim));
  for (auto& ind : pop)
    for (std::size_t k = 0; k < dim; ++k) ind[k] = rng.uniform() * hi[k % 2];
  std::vector<double> fit(np);
  for (std::size_t i = 0; i < np; ++i) fit[i] = fitness_of(pop[i], img, p.brightness_weight);

  auto best_index = [&] {
    return static_cast<std::size_t>(std::max_element(fit.begin(), fit.end()) - fit.begin());
  };
  if (best_per_generation) {
    best_per_generation->clear();
    best_per_generation->push_back(fit[best_index()]);
  }

  std::vector<std::vector<double>> trial(np, std::vector<double>(dim));
  std::vector<double> trial_fit(np);
  for (int gen = 0; gen < p.generations; ++gen) {
    // Draw all randomness serially so the result is independent of threading.
    for (std::size_t i = 0; i < np; ++i) {
      std::size_t a, b, c;
      do a = rng.index(np); while (a == i);
      do b = rng.index(np); while (b == i || b == a);
      do c = rng.index(np); while (c == i || c == a || c == b);
      const std::size_t forced = rng.index(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        if (k == forced || rng.uniform() < p.crossover_rate) {
          const double v = pop[a][k] + p.differential_weight * (pop[b][k] - pop[c][k]);
          trial[i][k] = std::clamp(v, 0.0, hi[k % 2]);
        } else {
          trial[i][k] = pop[i][k];
        }
      }
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(np); ++i)
      trial_fit[static_cast<std::size_t>(i)] =
          fitness_of(trial[static_cast<std::size_t>(i)], img, p.brightness_weight);
    for (std::size_t i = 0; i < np; ++i) {
      if (trial_fit[i] >= fit[i]) {
        std::swap(pop[i], trial[i]);
        fit[i] = trial_fit[i];
      }
    }
    if (best_per_generation) best_per_generation->push_back(fit[best_index()]);
  }

  const std::size_t b = best_index();
  SeedSolution best;
  best.fitness = fit[b];
  for (std::size_t k = 0; k < dim; k += 2) best.points.push_back({pop[b][k], pop[b][k + 1]});
  return best;
}

SeedSet to_seed_set(const SeedSolution& sol, Extent dims) {
  std::vector<Seed> seeds;
  seeds.reserve(sol.points.size());
  for (const auto& p : sol.points) seeds.push_back({round_to_pixel(p, dims), Label::Foreground});
  return SeedSet(std::move(seeds));
}

SeedSet generate_seeds(const GrayImage& img, const DeParams& p) {
  return to_seed_set(evolve(img, p), img.extent());
}

}  // namespace growcut::de
