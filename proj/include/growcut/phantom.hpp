#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "growcut/image.hpp"

namespace growcut::phantom {

/// Synthetic lesion shapes, all star-shaped around the frame center.
enum class Shape { Disc, Ellipse, Star };

std::string_view to_string(Shape s) noexcept;
/// Throws InvalidArgument for an unknown name.
Shape shape_from_string(std::string_view name);

struct PhantomParams {
  int size = 64;
  std::uint8_t object = 200;
  std::uint8_t ground = 40;
  /// Standard deviation of the additive Gaussian noise.
  double noise_sigma = 10.0;
  std::uint64_t rng_seed = 7;
};

struct Phantom {
  Shape shape = Shape::Disc;
  GrayImage image;
  BinaryMask truth;
  double cx = 0.0;
  double cy = 0.0;
};

/// Distance from the center to the shape outline along angle `theta`
/// (radians, y down), for a frame of side `size`.
double outline_radius(Shape s, int size, double theta) noexcept;

/// Pixel-center membership of the analytic shape.
BinaryMask truth_mask(Shape s, int size);

/// Noisy two-level image of the shape; noise is clamped to [0, 255].
Phantom make_phantom(Shape s, const PhantomParams& p = {});

/// `n_fg` object seeds at `fg_fraction` of the outline radius and `n_bg`
/// background seeds `bg_margin` pixels beyond it, at evenly spaced angles.
SeedSet placed_seeds(const Phantom& ph, int n_fg, int n_bg, double fg_fraction = 0.95,
                     double bg_margin = 5.0);

/// Writes `<shape>.png`, `<shape>.gt.png` and `<shape>.seeds.json` (6 + 6
/// seeds) for every shape into `dir`. Returns the ids written.
std::vector<std::string> write_corpus(const std::filesystem::path& dir,
                                      const PhantomParams& p = {});

}  // namespace growcut::phantom
