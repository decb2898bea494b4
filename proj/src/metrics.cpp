#include "growcut/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "growcut/contour.hpp"

namespace growcut::metrics {

namespace {

using I64 = long long;

I64 cross(Point o, Point a, Point b) {
  return static_cast<I64>(a.x - o.x) * (b.y - o.y) - static_cast<I64>(a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; counter-clockwise in (x right, y down) terms of
// the cross product, collinear points dropped.
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(),
            [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

bool in_hull(const std::vector<Point>& hull, Point p) {
  if (hull.size() == 1) return p == hull[0];
  if (hull.size() == 2) {
    const Point a = hull[0], b = hull[1];
    if (cross(a, b, p) != 0) return false;
    return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) && p.y >= std::min(a.y, b.y) &&
           p.y <= std::max(a.y, b.y);
  }
  for (std::size_t i = 0; i < hull.size(); ++i)
    if (cross(hull[i], hull[(i + 1) % hull.size()], p) < 0) return false;
  return true;
}

}  // namespace

std::size_t convex_area(const BinaryMask& mask) {
  std::vector<Point> pts;
  const Extent d = mask.extent();
  int x0 = d.width, x1 = -1, y0 = d.height, y1 = -1;
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x)
      if (mask.at(x, y)) {
        pts.push_back({x, y});
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
  if (pts.empty()) return 0;
  const auto hull = convex_hull(std::move(pts));
  std::size_t n = 0;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x)
      if (in_hull(hull, {x, y})) ++n;
  return n;
}

ShapeStats shape_stats(const BinaryMask& mask) {
  ShapeStats s;
  s.area = mask.count();
  if (s.area == 0) throw InvalidArgument("shape metrics of an empty mask");
  for (const auto& c : outer_contours(mask)) s.perimeter += contour_length(c);
  s.form_factor = s.perimeter > 0.0 ? 4.0 * std::numbers::pi * static_cast<double>(s.area) /
                                          (s.perimeter * s.perimeter)
                                    : 0.0;
  s.convex_area = convex_area(mask);
  s.solidity = static_cast<double>(s.area) / static_cast<double>(s.convex_area);

  const Extent d = mask.extent();
  int x0 = d.width, x1 = -1, y0 = d.height, y1 = -1;
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x)
      if (mask.at(x, y)) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
  s.feret_x = x1 - x0 + 1;
  s.feret_y = y1 - y0 + 1;
  return s;
}

Confusion confusion(const BinaryMask& seg, const BinaryMask& gt) {
  if (seg.extent() != gt.extent()) throw InvalidArgument("segmentation and ground truth sizes differ");
  Confusion c;
  const auto s = seg.bits();
  const auto g = gt.bits();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] && g[i])
      ++c.tp;
    else if (s[i])
      ++c.fp;
    else if (g[i])
      ++c.fn;
    else
      ++c.tn;
  }
  return c;
}

double balanced_accuracy(double sensitivity, double specificity) noexcept {
  return (sensitivity + specificity) / 2.0;
}

OverlapStats overlap_stats(const BinaryMask& seg, const BinaryMask& gt) {
  OverlapStats o;
  o.counts = confusion(seg, gt);
  const auto& c = o.counts;
  const std::size_t fg_total = (c.tp + c.fp) + (c.tp + c.fn);
  if (fg_total == 0) throw InvalidArgument("DSC undefined: both masks are empty");
  auto rate = [](std::size_t num, std::size_t den) {
    return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  o.dsc = 2.0 * static_cast<double>(c.tp) / static_cast<double>(fg_total);
  o.sensitivity = rate(c.tp, c.tp + c.fn);
  o.specificity = rate(c.tn, c.tn + c.fp);
  o.bac = balanced_accuracy(o.sensitivity, o.specificity);
  return o;
}

namespace {

SlopeSpectrum spectrum_unchecked(const GrayImage& img, const BinaryMask& mask) {
  SlopeSpectrum s;
  for (int y = 0; y < img.height(); ++y) {
    int run = 0;   // current increasing-run length within the stretch
    int prev = -1;
    auto close = [&] {
      if (run >= 2) ++s.bins[run];
      run = 0;
    };
    for (int x = 0; x < img.width(); ++x) {
      if (!mask.at(x, y)) {
        close();
        continue;
      }
      const int v = img.at(x, y);
      if (run > 0 && v > prev) {
        ++run;
      } else {
        close();
        run = 1;
      }
      prev = v;
    }
    close();
  }
  return s;
}

}  // namespace

SlopeSpectrum slope_spectrum(const GrayImage& img, const BinaryMask& mask) {
  if (img.extent() != mask.extent()) throw InvalidArgument("image and mask sizes differ");
  if (mask.none()) throw InvalidArgument("slope spectrum of an empty mask");
  return spectrum_unchecked(img, mask);
}

WilcoxonResult compare_spectra(const SlopeSpectrum& seg, const SlopeSpectrum& gt, double alpha) {
  std::map<int, std::pair<double, double>> paired;
  for (const auto& [len, n] : seg.bins) paired[len].first = static_cast<double>(n);
  for (const auto& [len, n] : gt.bins) paired[len].second = static_cast<double>(n);
  if (paired.empty()) return {};
  std::vector<double> a, b;
  for (const auto& [len, v] : paired) {
    a.push_back(v.first);
    b.push_back(v.second);
  }
  return wilcoxon_signed_rank(a, b, alpha);
}

double relative_error(double metric_seg, double metric_gt) {
  if (metric_gt == 0.0) throw InvalidArgument("relative error against a zero ground-truth metric");
  return std::abs(1.0 - metric_seg / metric_gt);
}

double shape_metric(const ShapeStats& s, std::string_view name) {
  if (name == "form_factor") return s.form_factor;
  if (name == "area") return static_cast<double>(s.area);
  if (name == "perimeter") return s.perimeter;
  if (name == "feret_x") return s.feret_x;
  if (name == "feret_y") return s.feret_y;
  if (name == "solidity") return s.solidity;
  throw InvalidArgument("unknown shape metric '" + std::string(name) + "'");
}

MetricsReport evaluate(const GrayImage& img, const BinaryMask& seg, const BinaryMask& gt,
                       double alpha) {
  if (img.extent() != seg.extent() || img.extent() != gt.extent())
    throw InvalidArgument("image, segmentation and ground truth sizes differ");
  MetricsReport r;
  r.gt_shape = shape_stats(gt);
  if (!seg.none()) r.shape = shape_stats(seg);
  r.overlap = overlap_stats(seg, gt);
  for (const char* name : kShapeMetricNames) {
    const double g = shape_metric(r.gt_shape, name);
    if (g != 0.0) r.relative_errors[name] = relative_error(shape_metric(r.shape, name), g);
  }
  const auto w = compare_spectra(spectrum_unchecked(img, seg), spectrum_unchecked(img, gt), alpha);
  r.ssp_pvalue = w.p_value;
  r.ssp_reject = w.reject;
  return r;
}

}  // namespace growcut::metrics
