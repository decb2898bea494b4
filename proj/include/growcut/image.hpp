#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "growcut/error.hpp"

namespace growcut {

/// Pixel coordinate: x is the column, y the row, origin at top-left.
struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

struct Extent {
  int width = 0;
  int height = 0;

  [[nodiscard]] std::size_t area() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  [[nodiscard]] bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width && y < height;
  }
  [[nodiscard]] bool contains(Point p) const noexcept { return contains(p.x, p.y); }
  [[nodiscard]] std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }

  friend bool operator==(const Extent&, const Extent&) = default;
};

enum class Label : std::uint8_t { Unlabeled = 0, Foreground = 1, Background = 2 };

std::string_view to_string(Label label) noexcept;

enum class Neighborhood : std::uint8_t { Moore8, VonNeumann4 };

struct Offset {
  int dx;
  int dy;
};

/// Neighbor offsets in row-major scan order (dy outer, dx inner).
inline constexpr std::array<Offset, 8> kMooreOffsets{{
    {-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};
inline constexpr std::array<Offset, 4> kVonNeumannOffsets{{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};

inline std::span<const Offset> offsets(Neighborhood n) noexcept {
  if (n == Neighborhood::Moore8) return kMooreOffsets;
  return kVonNeumannOffsets;
}

/// In-bounds neighbors of (x, y), in row-major offset order.
std::vector<Point> neighbors(Extent dims, int x, int y, Neighborhood n);

/// Rectangular 8-bit grayscale image, row-major.
class GrayImage {
public:
  GrayImage() = default;
  /// Throws InvalidArgument on zero dimensions or a size mismatch.
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);
  GrayImage(int width, int height, std::uint8_t fill);

  [[nodiscard]] int width() const noexcept { return dims_.width; }
  [[nodiscard]] int height() const noexcept { return dims_.height; }
  [[nodiscard]] Extent extent() const noexcept { return dims_; }
  [[nodiscard]] bool empty() const noexcept { return pixels_.empty(); }

  [[nodiscard]] std::uint8_t at(int x, int y) const noexcept { return pixels_[dims_.index(x, y)]; }
  void set(int x, int y, std::uint8_t v) noexcept { pixels_[dims_.index(x, y)] = v; }

  [[nodiscard]] std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  [[nodiscard]] std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
  Extent dims_{};
  std::vector<std::uint8_t> pixels_;
};

/// Foreground/background flags, row-major.
class BinaryMask {
public:
  BinaryMask() = default;
  explicit BinaryMask(Extent dims, bool fill = false);
  BinaryMask(Extent dims, std::vector<std::uint8_t> bits);

  [[nodiscard]] int width() const noexcept { return dims_.width; }
  [[nodiscard]] int height() const noexcept { return dims_.height; }
  [[nodiscard]] Extent extent() const noexcept { return dims_; }

  [[nodiscard]] bool at(int x, int y) const noexcept { return bits_[dims_.index(x, y)] != 0; }
  void set(int x, int y, bool v) noexcept { bits_[dims_.index(x, y)] = v ? 1 : 0; }

  /// One byte per pixel, 0 or 1.
  [[nodiscard]] std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  [[nodiscard]] std::span<std::uint8_t> bits() noexcept { return bits_; }

  [[nodiscard]] std::size_t count() const noexcept;
  [[nodiscard]] bool none() const noexcept { return count() == 0; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
  Extent dims_{};
  std::vector<std::uint8_t> bits_;
};

/// Per-pixel automaton state. Labels and strengths are kept in separate
/// arrays so the update kernels stream over them independently.
struct CellGrid {
  Extent dims{};
  std::vector<Label> labels;
  std::vector<double> strengths;

  CellGrid() = default;
  explicit CellGrid(Extent d)
      : dims(d), labels(d.area(), Label::Unlabeled), strengths(d.area(), 0.0) {}

  [[nodiscard]] Label label(int x, int y) const noexcept { return labels[dims.index(x, y)]; }
  [[nodiscard]] double strength(int x, int y) const noexcept { return strengths[dims.index(x, y)]; }

  friend bool operator==(const CellGrid&, const CellGrid&) = default;
};

struct Seed {
  Point at;
  Label label = Label::Foreground;

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// Labeled seed pixels. Construction sorts by coordinate, drops exact
/// duplicates and rejects a coordinate carrying two different labels.
class SeedSet {
public:
  SeedSet() = default;
  explicit SeedSet(std::vector<Seed> seeds);

  [[nodiscard]] std::span<const Seed> seeds() const noexcept { return seeds_; }
  [[nodiscard]] std::size_t size() const noexcept { return seeds_.size(); }
  [[nodiscard]] bool empty() const noexcept { return seeds_.empty(); }
  [[nodiscard]] auto begin() const noexcept { return seeds_.begin(); }
  [[nodiscard]] auto end() const noexcept { return seeds_.end(); }

  [[nodiscard]] std::size_t count(Label label) const noexcept;
  [[nodiscard]] std::vector<Point> points(Label label) const;

  /// Throws SeedError if any seed lies outside `dims`.
  void check_bounds(Extent dims) const;

  friend bool operator==(const SeedSet&, const SeedSet&) = default;

private:
  std::vector<Seed> seeds_;
};

/// Sub-image copy. Throws InvalidArgument when the rectangle leaves the image.
GrayImage crop_roi(const GrayImage& img, int x0, int y0, int w, int h);
BinaryMask crop_roi(const BinaryMask& mask, int x0, int y0, int w, int h);

}  // namespace growcut
