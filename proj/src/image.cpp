#include "growcut/image.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace growcut {

std::string_view to_string(Label label) noexcept {
  switch (label) {
    case Label::Foreground:
      return "fg";
    case Label::Background:
      return "bg";
    case Label::Unlabeled:
      break;
  }
  return "none";
}

std::vector<Point> neighbors(Extent dims, int x, int y, Neighborhood n) {
  std::vector<Point> out;
  out.reserve(8);
  for (const auto& o : offsets(n)) {
    const int nx = x + o.dx;
    const int ny = y + o.dy;
    if (dims.contains(nx, ny)) out.push_back({nx, ny});
  }
  return out;
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : dims_{width, height}, pixels_(std::move(pixels)) {
  if (width < 1 || height < 1) throw InvalidArgument("zero-dimension image");
  if (pixels_.size() != dims_.area())
    throw InvalidArgument("pixel buffer size does not match " + std::to_string(width) + "x" +
                          std::to_string(height));
}

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : GrayImage(width, height,
                std::vector<std::uint8_t>(width > 0 && height > 0
                                              ? static_cast<std::size_t>(width) * height
                                              : 0,
                                          fill)) {}

BinaryMask::BinaryMask(Extent dims, bool fill) : dims_(dims), bits_(dims.area(), fill ? 1 : 0) {
  if (dims.width < 1 || dims.height < 1) throw InvalidArgument("zero-dimension mask");
}

BinaryMask::BinaryMask(Extent dims, std::vector<std::uint8_t> bits)
    : dims_(dims), bits_(std::move(bits)) {
  if (dims.width < 1 || dims.height < 1) throw InvalidArgument("zero-dimension mask");
  if (bits_.size() != dims.area()) throw InvalidArgument("mask buffer size mismatch");
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

SeedSet::SeedSet(std::vector<Seed> seeds) : seeds_(std::move(seeds)) {
  for (const auto& s : seeds_)
    if (s.label == Label::Unlabeled) throw SeedError("seed without a label");
  std::sort(seeds_.begin(), seeds_.end(),
            [](const Seed& a, const Seed& b) { return a.at < b.at; });
  std::vector<Seed> unique;
  unique.reserve(seeds_.size());
  for (const auto& s : seeds_) {
    if (!unique.empty() && unique.back().at == s.at) {
      if (unique.back().label != s.label)
        throw SeedError("conflicting labels at (" + std::to_string(s.at.x) + "," +
                        std::to_string(s.at.y) + ")");
      continue;
    }
    unique.push_back(s);
  }
  seeds_ = std::move(unique);
}

std::size_t SeedSet::count(Label label) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      seeds_.begin(), seeds_.end(), [label](const Seed& s) { return s.label == label; }));
}

std::vector<Point> SeedSet::points(Label label) const {
  std::vector<Point> out;
  for (const auto& s : seeds_)
    if (s.label == label) out.push_back(s.at);
  return out;
}

void SeedSet::check_bounds(Extent dims) const {
  for (const auto& s : seeds_)
    if (!dims.contains(s.at))
      throw SeedError("seed (" + std::to_string(s.at.x) + "," + std::to_string(s.at.y) +
                      ") outside " + std::to_string(dims.width) + "x" +
                      std::to_string(dims.height) + " image");
}

namespace {

void check_rect(Extent dims, int x0, int y0, int w, int h) {
  if (x0 < 0 || y0 < 0 || w < 1 || h < 1 || x0 + w > dims.width || y0 + h > dims.height)
    throw InvalidArgument("region (" + std::to_string(x0) + "," + std::to_string(y0) + "," +
                          std::to_string(w) + "," + std::to_string(h) +
                          ") out of bounds");
}

}  // namespace

GrayImage crop_roi(const GrayImage& img, int x0, int y0, int w, int h) {
  check_rect(img.extent(), x0, y0, w, h);
  std::vector<std::uint8_t> px;
  px.reserve(static_cast<std::size_t>(w) * h);
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) px.push_back(img.at(x, y));
  return GrayImage(w, h, std::move(px));
}

BinaryMask crop_roi(const BinaryMask& mask, int x0, int y0, int w, int h) {
  check_rect(mask.extent(), x0, y0, w, h);
  BinaryMask out({w, h});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.set(x, y, mask.at(x0 + x, y0 + y));
  return out;
}

}  // namespace growcut
