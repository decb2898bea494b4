#include "growcut/autoseed_mlt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace growcut::mlt {

void MltParams::validate() const {
  if (level < 1) throw InvalidArgument("mlt level must be >= 1");
  if (depth < 1) throw InvalidArgument("mlt depth must be >= 1");
  if (!(min_region_fraction >= 0.0 && min_region_fraction < 1.0))
    throw InvalidArgument("mlt min_region_fraction must be in [0, 1)");
}

void DiffusionParams::validate() const {
  if (iterations < 0) throw InvalidArgument("diffusion iterations must be >= 0");
  if (!(time_step > 0.0) || time_step > 0.25)
    throw InvalidArgument("diffusion time_step must be in (0, 0.25]");
  if (!(contrast > 0.0)) throw InvalidArgument("diffusion contrast must be > 0");
  if (!(presmooth_sigma >= 0.0)) throw InvalidArgument("diffusion presmooth_sigma must be >= 0");
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  if (sigma <= 0.0) return {1.0};
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * static_cast<std::size_t>(r) + 1);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    k[static_cast<std::size_t>(i + r)] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[static_cast<std::size_t>(i + r)];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable blur with replicated borders.
void blur(const std::vector<double>& in, std::vector<double>& tmp, std::vector<double>& out,
          int w, int h, const std::vector<double>& k) {
  const int r = static_cast<int>(k.size() / 2);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) {
        const int xx = std::clamp(x + i, 0, w - 1);
        acc += k[static_cast<std::size_t>(i + r)] * in[static_cast<std::size_t>(y) * w + xx];
      }
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) {
        const int yy = std::clamp(y + i, 0, h - 1);
        acc += k[static_cast<std::size_t>(i + r)] * tmp[static_cast<std::size_t>(yy) * w + x];
      }
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
}

}  // namespace

GrayImage diffuse(const GrayImage& img, const DiffusionParams& p) {
  p.validate();
  if (p.iterations == 0) return img;
  const int w = img.width();
  const int h = img.height();
  const std::size_t n = img.extent().area();
  std::vector<double> u(n), next(n);
  std::copy(img.pixels().begin(), img.pixels().end(), u.begin());
  const double inv_k2 = 1.0 / (p.contrast * p.contrast);
  auto c = [inv_k2](double d) { return std::exp(-d * d * inv_k2); };
  const std::vector<double> kernel = gaussian_kernel(p.presmooth_sigma);
  std::vector<double> s(n), tmp(n);

  for (int it = 0; it < p.iterations; ++it) {
    // Edge-stopping is driven by the presmoothed image; the flux itself
    // moves the unsmoothed values.
    if (kernel.size() > 1) {
      blur(u, tmp, s, w, h, kernel);
    } else {
      s = u;
    }
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        const double v = u[i];
        const double sv = s[i];
        // Zero-flux boundary: missing neighbors contribute nothing.
        double flux = 0.0;
        auto add = [&](std::size_t j) { flux += c(s[j] - sv) * (u[j] - v); };
        if (x > 0) add(i - 1);
        if (x < w - 1) add(i + 1);
        if (y > 0) add(i - w);
        if (y < h - 1) add(i + w);
        next[i] = v + p.time_step * flux;
      }
    }
    std::swap(u, next);
  }

  std::vector<std::uint8_t> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = static_cast<std::uint8_t>(std::clamp(std::lround(u[i]), 0L, 255L));
  return GrayImage(w, h, std::move(out));
}

std::vector<int> threshold_schedule(const GrayImage& img, const MltParams& p) {
  p.validate();
  const int max = *std::max_element(img.pixels().begin(), img.pixels().end());
  std::vector<int> t;
  for (int k = 1; max - k * p.level >= 0; ++k) t.push_back(max - k * p.level);
  return t;
}

std::vector<BinaryMask> multilevel_threshold(const GrayImage& img, std::span<const int> thresholds) {
  std::vector<BinaryMask> layers;
  layers.reserve(thresholds.size());
  for (int t : thresholds) {
    BinaryMask m(img.extent());
    auto bits = m.bits();
    const auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) bits[i] = px[i] >= t ? 1 : 0;
    layers.push_back(std::move(m));
  }
  return layers;
}

std::vector<BinaryMask> multilevel_threshold(const GrayImage& img, const MltParams& p) {
  const auto t = threshold_schedule(img, p);
  return multilevel_threshold(img, t);
}

std::vector<int> label_components(const BinaryMask& mask, int* count) {
  const Extent d = mask.extent();
  std::vector<int> labels(d.area(), 0);
  std::vector<Point> stack;
  int next = 0;
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) {
      if (!mask.at(x, y) || labels[d.index(x, y)] != 0) continue;
      ++next;
      labels[d.index(x, y)] = next;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        for (const auto& o : kMooreOffsets) {
          const int nx = p.x + o.dx, ny = p.y + o.dy;
          if (!d.contains(nx, ny) || !mask.at(nx, ny)) continue;
          auto& l = labels[d.index(nx, ny)];
          if (l == 0) {
            l = next;
            stack.push_back({nx, ny});
          }
        }
      }
    }
  }
  if (count) *count = next;
  return labels;
}

BinaryMask largest_component(const BinaryMask& mask) {
  int n = 0;
  const auto labels = label_components(mask, &n);
  BinaryMask out(mask.extent());
  if (n == 0) return out;
  std::vector<std::size_t> area(static_cast<std::size_t>(n) + 1, 0);
  for (int l : labels)
    if (l) ++area[static_cast<std::size_t>(l)];
  const auto best = static_cast<int>(std::max_element(area.begin() + 1, area.end()) - area.begin());
  auto bits = out.bits();
  for (std::size_t i = 0; i < labels.size(); ++i) bits[i] = labels[i] == best ? 1 : 0;
  return out;
}

BinaryMask select_mass_region(std::span<const BinaryMask> layers, Extent roi, int depth,
                              std::size_t min_area) {
  if (depth < 1) throw InvalidArgument("depth must be >= 1");
  for (const auto& l : layers)
    if (l.extent() != roi) throw InvalidArgument("layer size does not match ROI");
  // Layers are nested, so once one holds a large enough region every later
  // one does too. Without any such layer, start from the top.
  std::size_t first = 0;
  if (min_area > 0) {
    while (first < layers.size() && largest_component(layers[first]).count() < min_area) ++first;
    if (first == layers.size()) first = 0;
  }
  BinaryMask merged(roi);
  const std::size_t take = std::min(layers.size() - first, static_cast<std::size_t>(depth));
  auto bits = merged.bits();
  for (std::size_t k = first; k < first + take; ++k) {
    const auto lb = layers[k].bits();
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] |= lb[i];
  }
  return largest_component(merged);
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
  if (radius < 0) throw InvalidArgument("dilation radius must be >= 0");
  const Extent d = mask.extent();
  std::vector<Offset> se;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius) se.push_back({dx, dy});
  BinaryMask out(d);
  auto bits = out.bits();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) {
      bool hit = false;
      for (const auto& o : se) {
        const int sx = x + o.dx, sy = y + o.dy;
        if (d.contains(sx, sy) && mask.at(sx, sy)) {
          hit = true;
          break;
        }
      }
      bits[d.index(x, y)] = hit ? 1 : 0;
    }
  }
  return out;
}

SeedSet synthesize_seeds(const BinaryMask& region, const SeedSynthesisParams& p) {
  if (region.none()) throw NoCandidateError("no mass candidate found");
  const Extent d = region.extent();

  const BinaryMask grown = dilate(region, p.dilation_radius);
  std::vector<Seed> seeds;
  std::vector<Point> band;
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) {
      if (!grown.at(x, y) || region.at(x, y)) continue;
      band.push_back({x, y});
      bool on_ring = false;
      for (const auto& o : kMooreOffsets) {
        const int nx = x + o.dx, ny = y + o.dy;
        if (d.contains(nx, ny) && !grown.at(nx, ny)) {
          on_ring = true;
          break;
        }
      }
      if (on_ring) seeds.push_back({{x, y}, Label::Background});
    }
  }
  // Dilation swallowed the whole frame: fall back to the full band.
  if (seeds.empty())
    for (const auto& b : band) seeds.push_back({b, Label::Background});

  double cx = 0.0, cy = 0.0;
  std::size_t area = 0;
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x)
      if (region.at(x, y)) {
        cx += x;
        cy += y;
        ++area;
      }
  cx /= static_cast<double>(area);
  cy /= static_cast<double>(area);
  Point centre{static_cast<int>(std::lround(cx)), static_cast<int>(std::lround(cy))};
  if (!d.contains(centre) || !region.at(centre.x, centre.y)) {
    // Concave region: snap to the nearest region pixel.
    double best = std::numeric_limits<double>::infinity();
    for (int y = 0; y < d.height; ++y)
      for (int x = 0; x < d.width; ++x)
        if (region.at(x, y)) {
          const double dd = (x - cx) * (x - cx) + (y - cy) * (y - cy);
          if (dd < best) {
            best = dd;
            centre = {x, y};
          }
        }
  }
  const int r = p.centroid_radius;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      const int x = centre.x + dx, y = centre.y + dy;
      if (dx * dx + dy * dy <= r * r && d.contains(x, y) && region.at(x, y))
        seeds.push_back({{x, y}, Label::Foreground});
    }
  return SeedSet(std::move(seeds));
}

SeedSet generate_seeds(const GrayImage& img, const MltParams& mlt, const DiffusionParams& diff,
                       const SeedSynthesisParams& seeding, SsgcTrace* trace) {
  mlt.validate();
  GrayImage smooth = diffuse(img, diff);
  auto layers = multilevel_threshold(smooth, mlt);
  const auto min_area = static_cast<std::size_t>(
      std::ceil(mlt.min_region_fraction * static_cast<double>(img.extent().area())));
  BinaryMask region = select_mass_region(layers, img.extent(), mlt.depth, min_area);
  if (region.none() || region.count() == region.extent().area())
    throw NoCandidateError("no mass candidate found");
  SeedSet seeds = synthesize_seeds(region, seeding);
  if (trace) {
    trace->diffused = std::move(smooth);
    trace->layers = std::move(layers);
    trace->region = std::move(region);
    trace->seeds = seeds;
  }
  return seeds;
}

SegmentationResult run_ssgc(const GrayImage& img, const MltParams& mlt,
                            const DiffusionParams& diff, const GrowCutConfig& gc,
                            const SeedSynthesisParams& seeding, SsgcTrace* trace) {
  SsgcTrace local;
  SsgcTrace& t = trace ? *trace : local;
  const SeedSet seeds = generate_seeds(img, mlt, diff, seeding, &t);
  return run(t.diffused, seeds, gc);
}

}  // namespace growcut::mlt
