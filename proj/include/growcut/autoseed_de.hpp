#pragma once

#include <cstdint>
#include <vector>

#include "growcut/image.hpp"

namespace growcut::de {

struct DeParams {
  int points_per_solution = 30;
  int population_size = 20;
  int generations = 100;
  double differential_weight = 0.8;  ///< F
  double crossover_rate = 0.9;       ///< CR
  double brightness_weight = 0.5;    ///< w; (1 - w) weights the spread term
  std::uint64_t rng_seed = 1;

  void validate() const;
};

struct PointF {
  double x = 0.0;
  double y = 0.0;
};

struct SeedSolution {
  std::vector<PointF> points;
  double fitness = 0.0;
};

/// w * mean brightness / 255 + (1 - w) * min pairwise distance / diagonal,
/// sampled at the rounded point positions. A single point has spread 1.
double fitness(const std::vector<PointF>& points, const GrayImage& img, double w);
double fitness(const SeedSolution& sol, const GrayImage& img, double w);

/// DE/rand/1/bin over flattened (x, y) vectors, clamp repair, greedy
/// selection. `best_per_generation`, when given, receives the best fitness
/// after initialization followed by one entry per generation.
SeedSolution evolve(const GrayImage& img, const DeParams& p,
                    std::vector<double>* best_per_generation = nullptr);

/// Rounds the evolved points to pixels, deduplicates, labels them Foreground.
SeedSet to_seed_set(const SeedSolution& sol, Extent dims);
SeedSet generate_seeds(const GrayImage& img, const DeParams& p = {});

}  // namespace growcut::de
