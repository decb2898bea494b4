// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "growcut/autoseed_de.hpp"
#include "growcut/autoseed_mlt.hpp"
#include "growcut/fuzzy.hpp"
#include "growcut/growcut.hpp"
#include "growcut/io.hpp"
#include "growcut/metrics.hpp"
#include "growcut/phantom.hpp"
#include "support/naive_ca.hpp"
#include "support/temp_dir.hpp"
#include "support/worked_example.hpp"

using namespace growcut;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<int> labels_of(const CellGrid& g) {
  std::vector<int> out;
  out.reserve(g.labels.size());
  for (Label l : g.labels) out.push_back(static_cast<int>(l));
  return out;
}

// Calls f(w, h, pixels) for every image of at most 3x3 cells over {0, 128, 255}.
void for_each_small_image(const std::function<void(int, int, const std::vector<int>&)>& f) {
  constexpr int kLevels[3] = {0, 128, 255};
  for (int h = 1; h <= 3; ++h)
    for (int w = 1; w <= 3; ++w) {
      const int n = w * h;
      int total = 1;
      for (int i = 0; i < n; ++i) total *= 3;
      std::vector<int> px(static_cast<std::size_t>(n));
      for (int code = 0; code < total; ++code) {
        int c = code;
        for (int i = 0; i < n; ++i, c /= 3) px[static_cast<std::size_t>(i)] = kLevels[c % 3];
        f(w, h, px);
      }
    }
}

GrayImage to_image(int w, int h, const std::vector<int>& px) {
  return GrayImage(w, h, std::vector<std::uint8_t>(px.begin(), px.end()));
}

void growcut_oracle() {
  const auto t0 = Clock::now();
  long cases = 0, mismatches = 0;
  for_each_small_image([&](int w, int h, const std::vector<int>& px) {
    const GrayImage img = to_image(w, h, px);
    const int n = w * h;
    for (int f = 0; f < n; ++f)
      for (int b = 0; b < n; ++b) {
        if (f == b) continue;
        const SeedSet s({{{f % w, f / w}, Label::Foreground}, {{b % w, b / w}, Label::Background}});
        const SegmentationResult r = run(img, s, {}, Kernel::Serial);
        const naive::Result ref = naive::growcut(w, h, px, {{f % w, f / w, 1}, {b % w, b / w, 2}});
        ++cases;
        if (labels_of(r.final_grid) != ref.label || r.final_grid.strengths != ref.strength ||
            r.iterations_used != ref.iterations)
          ++mismatches;
      }
  });
  const double secs = seconds_since(t0);
  report("growcut-exhaustive-oracle", mismatches == 0 && secs < 60.0,
         fmt("%ld cases, %ld mismatches, %.1f s", cases, mismatches, secs));
}

void fuzzy_oracle() {
  const auto t0 = Clock::now();
  long cases = 0, mismatches = 0;
  fuzzy::FuzzyGrowCutConfig cfg;
  for_each_small_image([&](int w, int h, const std::vector<int>& px) {
    const GrayImage img = to_image(w, h, px);
    const int n = w * h;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        std::vector<Seed> seeds{{{a % w, a / w}, Label::Foreground}};
        std::vector<std::pair<int, int>> pts{{a % w, a / w}};
        if (b != a) {
          seeds.push_back({{b % w, b / w}, Label::Foreground});
          pts.push_back({b % w, b / w});
        }
        const SegmentationResult r = fuzzy::run_fuzzy(img, SeedSet(seeds), cfg, Kernel::Serial);
        const naive::Result ref = naive::fuzzy(w, h, px, pts, cfg.alpha);
        ++cases;
        if (labels_of(r.final_grid) != ref.label || r.final_grid.strengths != ref.strength ||
            r.iterations_used != ref.iterations)
          ++mismatches;
      }
  });
  report("fuzzy-exhaustive-oracle", mismatches == 0,
         fmt("%ld cases, %ld mismatches, %.1f s", cases, mismatches, seconds_since(t0)));
}

void worked_example() {
  const GrayImage img(worked::kSize, worked::kSize, worked::image());
  std::vector<Seed> s;
  for (auto p : worked::kSeeds) s.push_back({{p.x, p.y}, Label::Foreground});
  fuzzy::FuzzyGrowCutConfig cfg;
  cfg.alpha = worked::kAlpha;
  const auto model = fuzzy::fit_model(SeedSet(s), cfg);
  const auto outside = fuzzy::frontier_map(model, img.extent());
  bool trace_ok = true;
  for (int i = 0; i < 25; ++i) trace_ok &= static_cast<int>(outside[i]) == worked::kOutside[i];

  // Generation by generation, counting the ones that change a label.
  CellGrid g = fuzzy::init_fuzzy(img, model);
  for (int i = 0; i < 25; ++i) trace_ok &= static_cast<int>(g.labels[i]) == worked::kLabelsInit[i];
  int label_steps = 0, steps = 0;
  for (;;) {
    CellGrid next;
    const StepStats st = fuzzy::step(img, outside, g, next, cfg, Kernel::Serial);
    ++steps;
    if (steps == 1)
      for (int i = 0; i < 25; ++i)
        trace_ok &= static_cast<int>(next.labels[i]) == worked::kLabelsAfter1[i] &&
                    next.strengths[i] == worked::strength_after1(i);
    if (st.label_changes) ++label_steps;
    g = std::move(next);
    if (st.fixed_point() || steps > 50) break;
  }
  const SegmentationResult r = fuzzy::run_fuzzy(img, SeedSet(s), cfg);
  bool block = true;
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) block &= r.mask.at(x, y) == (x >= 2 && y >= 2);
  const bool ok = trace_ok && block && label_steps == worked::kLabelChangingIterations &&
                  r.iterations_used == worked::kIterations && r.converged;
  report("worked-example", ok,
         fmt("trace %s, bright block foreground %s, %d label-changing generation(s), %d generations "
             "including the confirming one",
             trace_ok ? "matches" : "differs", block ? "yes" : "no", label_steps, r.iterations_used));
}

void phantom_suite() {
  using phantom::Shape;
  struct Case {
    std::string name;
    Shape shape;
    std::function<SegmentationResult(const phantom::Phantom&)> run;
    double min_dsc;
  };
  const std::vector<Case> cases{
      {"growcut-disc", Shape::Disc, [](auto& ph) { return run(ph.image, phantom::placed_seeds(ph, 6, 6)); }, 0.95},
      {"growcut-ellipse", Shape::Ellipse, [](auto& ph) { return run(ph.image, phantom::placed_seeds(ph, 6, 6)); }, 0.95},
      {"growcut-star", Shape::Star, [](auto& ph) { return run(ph.image, phantom::placed_seeds(ph, 6, 6)); }, 0.85},
      {"fuzzy-disc", Shape::Disc, [](auto& ph) { return fuzzy::run_fuzzy(ph.image, phantom::placed_seeds(ph, 8, 0)); }, 0.90},
      {"ssgc-disc", Shape::Disc, [](auto& ph) { return mlt::run_ssgc(ph.image); }, 0.85},
  };
  for (const auto& c : cases) {
    const auto ph = phantom::make_phantom(c.shape);
    const auto t0 = Clock::now();
    const SegmentationResult r = c.run(ph);
    const double secs = seconds_since(t0);
    const double dsc = metrics::overlap_stats(r.mask, ph.truth).dsc;
    report("phantom-" + c.name, dsc >= c.min_dsc && secs < 5.0,
           fmt("DSC %.4f (need >= %.2f), %.3f s", dsc, c.min_dsc, secs));
  }
}

void fault_tolerance() {
  const auto ph = phantom::make_phantom(phantom::Shape::Disc);
  const Point bad{static_cast<int>(std::lround(ph.cx + 23)), static_cast<int>(std::lround(ph.cy))};
  auto dsc = [&](const BinaryMask& m) { return metrics::overlap_stats(m, ph.truth).dsc; };

  const SeedSet fz = phantom::placed_seeds(ph, 8, 0);
  std::vector<Seed> fz_bad(fz.begin(), fz.end());
  fz_bad.push_back({bad, Label::Foreground});
  const double fz_drop = dsc(fuzzy::run_fuzzy(ph.image, fz).mask) - dsc(fuzzy::run_fuzzy(ph.image, SeedSet(fz_bad)).mask);

  const SeedSet gc = phantom::placed_seeds(ph, 6, 6);
  std::vector<Seed> gc_bad(gc.begin(), gc.end());
  gc_bad.push_back({bad, Label::Foreground});
  const double gc_drop = dsc(run(ph.image, gc).mask) - dsc(run(ph.image, SeedSet(gc_bad)).mask);

  report("fault-tolerance", fz_drop < 0.05 && gc_drop > fz_drop,
         fmt("misplaced seed at (%d,%d): fuzzy DSC drop %.4f (< 0.05), growcut DSC drop %.4f", bad.x,
             bad.y, fz_drop, gc_drop));
}

void metric_fidelity() {
  BinaryMask disc({48, 48});
  for (int y = 0; y < 48; ++y)
    for (int x = 0; x < 48; ++x) disc.set(x, y, (x - 23.5) * (x - 23.5) + (y - 23.5) * (y - 23.5) <= 400.0);
  const double ff_disc = metrics::shape_stats(disc).form_factor;
  report("form-factor-circle", std::abs(ff_disc - 1.0) <= 0.05, fmt("radius 20: %.4f", ff_disc));

  BinaryMask sq({68, 68});
  for (int y = 2; y < 66; ++y)
    for (int x = 2; x < 66; ++x) sq.set(x, y, true);
  const auto s = metrics::shape_stats(sq);
  report("form-factor-square", std::abs(s.form_factor - std::numbers::pi / 4) <= 0.08 && s.solidity == 1.0,
         fmt("64x64: form factor %.4f vs %.4f, solidity %.3f", s.form_factor, std::numbers::pi / 4, s.solidity));

  std::mt19937 rng(2024);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Extent d{1 + static_cast<int>(rng() % 16), 1 + static_cast<int>(rng() % 16)};
    BinaryMask a(d), b(d);
    const int da = rng() % 101, db = rng() % 101;
    for (auto& v : a.bits()) v = static_cast<int>(rng() % 100) < da;
    for (auto& v : b.bits()) v = static_cast<int>(rng() % 100) < db;
    if (a.none() && b.none()) b.set(0, 0, true);
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (int y = 0; y < d.height; ++y)
      for (int x = 0; x < d.width; ++x) {
        tp += a.at(x, y) && b.at(x, y);
        fp += a.at(x, y) && !b.at(x, y);
        tn += !a.at(x, y) && !b.at(x, y);
        fn += !a.at(x, y) && b.at(x, y);
      }
    const auto o = metrics::overlap_stats(a, b);
    const double sens = tp + fn ? static_cast<double>(tp) / (tp + fn) : 1.0;
    const double spec = tn + fp ? static_cast<double>(tn) / (tn + fp) : 1.0;
    bad += !(o.counts.tp == tp && o.counts.fp == fp && o.counts.tn == tn && o.counts.fn == fn &&
             o.dsc == 2.0 * tp / (2.0 * tp + fp + fn) && o.sensitivity == sens && o.specificity == spec &&
             o.bac == (sens + spec) / 2);
  }
  report("overlap-oracle", bad == 0, fmt("1000 random mask pairs, %d mismatches", bad));

  const double bac = metrics::balanced_accuracy(0.901, 0.944);
  report("bac-table-value", std::abs(bac - 0.9225) < 1e-12 && std::lround(bac * 1000) == 923,
         fmt("BAC(0.901, 0.944) = %.4f, rounds to %.3f", bac, std::round(bac * 1000) / 1000));
}

double enumerate_p(const std::vector<double>& d) {
  const std::size_t n = d.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return std::abs(d[a]) < std::abs(d[b]); });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[idx[i]] = static_cast<double>(i + 1);
  double w = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] > 0) w += rank[i];
  std::size_t le = 0, ge = 0;
  for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (m >> i & 1) s += rank[i];
    le += s <= w;
    ge += s >= w;
  }
  return std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) / static_cast<double>(std::size_t{1} << n));
}

void wilcoxon() {
  std::mt19937 rng(99);
  int bad = 0, cases = 0;
  for (int n = 1; n <= 10; ++n)
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> a(n), b(n), d(n);
      std::vector<int> mags(60);
      for (int i = 0; i < 60; ++i) mags[i] = i + 1;
      std::shuffle(mags.begin(), mags.end(), rng);  // distinct magnitudes: no ties
      for (int i = 0; i < n; ++i) {
        a[i] = 100.0 + (rng() % 50);
        d[i] = (rng() % 2 ? 1.0 : -1.0) * mags[i] / 8.0;
        b[i] = a[i] - d[i];
      }
      ++cases;
      const auto r = metrics::wilcoxon_signed_rank(a, b);
      bad += std::abs(r.p_value - enumerate_p(d)) > 1e-12;
    }
  report("wilcoxon-exact-enumeration", bad == 0, fmt("%d random tie-free samples, n <= 10, %d mismatches", cases, bad));

  std::vector<double> a(15);
  for (auto& v : a) v = rng() % 100;
  const auto same = metrics::wilcoxon_signed_rank(a, a);
  report("wilcoxon-identical-samples", same.p_value == 1.0 && !same.reject, fmt("p = %.3f", same.p_value));
}

void relative_errors() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  int bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    if (x == 0.0) continue;
    bad += metrics::relative_error(x, x) != 0.0;
  }
  const double e = metrics::relative_error(0.9, 1.0);
  report("relative-error", bad == 0 && std::abs(e - 0.1) < 1e-12,
         fmt("10000 random x: %d nonzero; relative_error(0.9, 1.0) = %.6f", bad, e));
}

void de_sanity() {
  const GrayImage img(8, 8, std::uint8_t{0});
  de::DeParams p;
  p.points_per_solution = 2;
  // Exhaustive optimum over pixel pairs.
  double best = 0;
  for (int a = 0; a < 64; ++a)
    for (int b = a + 1; b < 64; ++b)
      best = std::max(best, de::fitness(std::vector<de::PointF>{{double(a % 8), double(a / 8)}, {double(b % 8), double(b / 8)}},
                                        img, p.brightness_weight));
  std::vector<double> trace;
  const auto sol = de::evolve(img, p, &trace);
  bool monotone = true;
  for (std::size_t i = 1; i < trace.size(); ++i) monotone &= trace[i] >= trace[i - 1];
  report("de-near-optimum", sol.fitness >= 0.95 * best,
         fmt("evolved %.4f vs exhaustive %.4f (ratio %.4f)", sol.fitness, best, sol.fitness / best));
  report("de-elitism", monotone, fmt("best fitness non-decreasing over %zu generations", trace.size() - 1));

  const auto ph = phantom::make_phantom(phantom::Shape::Disc);
  de::DeParams q;
  q.rng_seed = 12345;
  const std::string s1 = io::seeds_to_json(de::generate_seeds(ph.image, q)).dump();
  const std::string s2 = io::seeds_to_json(de::generate_seeds(ph.image, q)).dump();
  report("de-determinism", s1 == s2, fmt("two runs with rng_seed 12345: %zu-byte seed lists %s", s1.size(),
                                         s1 == s2 ? "identical" : "differ"));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void batch_determinism() {
  TempDir dir("accept");
  auto sh = [](const std::string& cmd) {
    const int st = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  };
  const std::string cli = GROWCUT_CLI;
  bool ok = sh(cli + " phantoms --out '" + (dir / "corpus").string() + "'") == 0;
  for (const char* run : {"a", "b"}) {
    io::write_text(dir / (std::string(run) + ".json"),
                   std::string(R"({"corpus_dir": "corpus", "output_dir": ")") + run +
                       R"(", "methods": ["growcut", "fuzzy", "ssgc", "regiongrow"], "rng_seed": 3})");
    ok &= sh(cli + " batch --spec '" + (dir / (std::string(run) + ".json")).string() + "'") == 0;
  }
  std::string detail;
  for (const char* f : {"records.csv", "summary.csv", "wilcoxon.csv", "failures.csv"}) {
    const std::string a = slurp(dir / "a" / f), b = slurp(dir / "b" / f);
    const bool same = !a.empty() && a == b;
    ok &= same;
    detail += std::string(f) + (same ? " identical; " : " DIFFERS; ");
  }
  report("batch-determinism", ok, detail + "wall times are kept apart in timings.csv");
}

}  // namespace

int main() {
  growcut_oracle();
  fuzzy_oracle();
  worked_example();
  phantom_suite();
  fault_tolerance();
  metric_fidelity();
  wilcoxon();
  relative_errors();
  de_sanity();
  batch_determinism();
  std::printf("%d failure(s)\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
