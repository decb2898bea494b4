#include "growcut/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "growcut/io.hpp"

namespace growcut::phantom {

namespace {

constexpr double kPi = std::numbers::pi;

// Box-Muller over raw mt19937_64 bits, so noise is identical across
// standard libraries.
class Gaussian {
public:
  explicit Gaussian(std::uint64_t seed) : engine_(seed) {}
  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

private:
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

double center(int size) { return (size - 1) / 2.0; }

}  // namespace

std::string_view to_string(Shape s) noexcept {
  switch (s) {
    case Shape::Disc: return "disc";
    case Shape::Ellipse: return "ellipse";
    case Shape::Star: return "star";
  }
  return "disc";
}

Shape shape_from_string(std::string_view name) {
  if (name == "disc") return Shape::Disc;
  if (name == "ellipse") return Shape::Ellipse;
  if (name == "star") return Shape::Star;
  throw InvalidArgument("unknown phantom shape '" + std::string(name) + "'");
}

double outline_radius(Shape s, int size, double theta) noexcept {
  const double scale = size / 64.0;
  switch (s) {
    case Shape::Disc:
      return 18.0 * scale;
    case Shape::Ellipse: {
      // semi-axes 22 x 13, rotated by 30 degrees
      const double a = 22.0 * scale, b = 13.0 * scale;
      const double t = theta - kPi / 6.0;
      const double c = std::cos(t) / a, d = std::sin(t) / b;
      return 1.0 / std::sqrt(c * c + d * d);
    }
    case Shape::Star:
      return 16.0 * scale * (1.0 + 0.35 * std::cos(5.0 * theta));
  }
  return 0.0;
}

BinaryMask truth_mask(Shape s, int size) {
  if (size < 8) throw InvalidArgument("phantom size must be >= 8");
  BinaryMask m({size, size});
  const double c = center(size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double dx = x - c, dy = y - c;
      const double r = std::hypot(dx, dy);
      m.set(x, y, r <= outline_radius(s, size, std::atan2(dy, dx)));
    }
  return m;
}

Phantom make_phantom(Shape s, const PhantomParams& p) {
  Phantom ph;
  ph.shape = s;
  ph.truth = truth_mask(s, p.size);
  ph.cx = ph.cy = center(p.size);
  Gaussian noise(p.rng_seed ^ (static_cast<std::uint64_t>(s) + 1) * 0x9E3779B97F4A7C15ULL);
  std::vector<std::uint8_t> px(ph.truth.extent().area());
  const auto bits = ph.truth.bits();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const double base = bits[i] ? p.object : p.ground;
    const double v = std::round(base + p.noise_sigma * noise());
    px[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  ph.image = GrayImage(p.size, p.size, std::move(px));
  return ph;
}

SeedSet placed_seeds(const Phantom& ph, int n_fg, int n_bg, double fg_fraction,
                     double bg_margin) {
  const Extent d = ph.image.extent();
  std::vector<Seed> seeds;
  auto place = [&](int n, double phase, Label label, auto radius_of) {
    for (int i = 0; i < n; ++i) {
      const double t = phase + 2.0 * kPi * i / n;
      const double r = radius_of(outline_radius(ph.shape, d.width, t));
      const int x = std::clamp(static_cast<int>(std::lround(ph.cx + r * std::cos(t))), 0,
                               d.width - 1);
      const int y = std::clamp(static_cast<int>(std::lround(ph.cy + r * std::sin(t))), 0,
                               d.height - 1);
      seeds.push_back({{x, y}, label});
    }
  };
  place(n_fg, 0.0, Label::Foreground, [&](double r) { return fg_fraction * r; });
  place(n_bg, n_bg > 0 ? kPi / n_bg : 0.0, Label::Background,
        [&](double r) { return r + bg_margin; });
  return SeedSet(std::move(seeds));
}

std::vector<std::string> write_corpus(const std::filesystem::path& dir, const PhantomParams& p) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> ids;
  for (Shape s : {Shape::Disc, Shape::Ellipse, Shape::Star}) {
    const Phantom ph = make_phantom(s, p);
    const std::string id(to_string(s));
    io::save_gray_image(ph.image, dir / (id + ".png"));
    io::save_mask(ph.truth, dir / (id + ".gt.png"));
    io::save_seeds(placed_seeds(ph, 6, 6), dir / (id + ".seeds.json"));
    ids.push_back(id);
  }
  return ids;
}

}  // namespace growcut::phantom
