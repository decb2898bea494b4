#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "growcut/growcut.hpp"
#include "growcut/metrics.hpp"
#include "support/naive_ca.hpp"

using namespace growcut;

namespace {

std::vector<int> labels_of(const CellGrid& g) {
  std::vector<int> out;
  for (Label l : g.labels) out.push_back(static_cast<int>(l));
  return out;
}

GrayImage random_image(std::mt19937& rng, int w, int h, int levels = 256) {
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w * h));
  for (auto& v : px) v = static_cast<std::uint8_t>((rng() % levels) * (255 / std::max(1, levels - 1)));
  return GrayImage(w, h, std::move(px));
}

std::vector<int> as_ints(const GrayImage& img) {
  return {img.pixels().begin(), img.pixels().end()};
}

// 32x32 disc of radius 10 at 200 on 20.
GrayImage disc_image(BinaryMask* truth) {
  GrayImage img(32, 32, std::uint8_t{20});
  BinaryMask t({32, 32});
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x)
      if ((x - 15.5) * (x - 15.5) + (y - 15.5) * (y - 15.5) <= 100.0) {
        img.set(x, y, 200);
        t.set(x, y, true);
      }
  if (truth) *truth = t;
  return img;
}

SeedSet disc_seeds() {
  return SeedSet({{{16, 16}, Label::Foreground},
                  {{0, 0}, Label::Background},
                  {{31, 0}, Label::Background},
                  {{0, 31}, Label::Background},
                  {{31, 31}, Label::Background}});
}

}  // namespace

TEST_CASE("attenuation_g") {
  const GrowCutConfig cfg;
  CHECK(attenuation_g(0, cfg) == 1.0);
  CHECK(attenuation_g(255, cfg) == 0.0);
  CHECK(attenuation_g(127.5, cfg) == doctest::Approx(0.5));
  CHECK_THROWS_AS(attenuation_g(-1, cfg), InvalidArgument);
  CHECK_THROWS_AS(attenuation_g(256, cfg), InvalidArgument);
}

TEST_CASE("config validation") {
  GrowCutConfig cfg;
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.max_intensity_norm = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("init_grid") {
  const GrayImage img(3, 3, std::uint8_t{5});
  const CellGrid empty = init_grid(img, {});
  CHECK(std::all_of(empty.labels.begin(), empty.labels.end(), [](Label l) { return l == Label::Unlabeled; }));
  CHECK(std::all_of(empty.strengths.begin(), empty.strengths.end(), [](double s) { return s == 0.0; }));

  const CellGrid one = init_grid(img, SeedSet({{{1, 1}, Label::Foreground}}));
  CHECK(std::count(one.labels.begin(), one.labels.end(), Label::Foreground) == 1);
  CHECK(one.label(1, 1) == Label::Foreground);
  CHECK(one.strength(1, 1) == 1.0);

  const CellGrid two = init_grid(img, SeedSet({{{0, 0}, Label::Foreground}, {{2, 2}, Label::Background}}));
  CHECK(two.label(0, 0) == Label::Foreground);
  CHECK(two.label(2, 2) == Label::Background);
  CHECK(std::count(two.labels.begin(), two.labels.end(), Label::Unlabeled) == 7);

  CHECK_THROWS_AS(init_grid(img, SeedSet({{{3, 0}, Label::Foreground}})), SeedError);
}

TEST_CASE("uniform 3x3 with a center seed fills in one step") {
  const GrayImage img(3, 3, std::uint8_t{90});
  const CellGrid g0 = init_grid(img, SeedSet({{{1, 1}, Label::Foreground}}));
  const auto [g1, changed] = step(img, g0, GrowCutConfig{});
  CHECK(changed == 8);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) {
      CHECK(g1.label(x, y) == Label::Foreground);
      CHECK(g1.strength(x, y) == 1.0);
    }
  const auto [g2, changed2] = step(img, g1, GrowCutConfig{});
  CHECK(changed2 == 0);
  CHECK(g2 == g1);
}

TEST_CASE("a zero attack does not conquer") {
  const GrayImage img(2, 1, {0, 255});
  const CellGrid g0 = init_grid(img, SeedSet({{{0, 0}, Label::Foreground}}));
  const auto [g1, changed] = step(img, g0, GrowCutConfig{});
  CHECK(changed == 0);
  CHECK(g1.label(1, 0) == Label::Unlabeled);
  CHECK(g1.strength(1, 0) == 0.0);
}

TEST_CASE("step rejects mismatched grids") {
  const GrayImage img(3, 3, std::uint8_t{0});
  CellGrid g(Extent{2, 3});
  CHECK_THROWS_AS(step(img, g, GrowCutConfig{}), InvalidArgument);
}

TEST_CASE("equal attacks go to the first neighbor in scan order") {
  // (1,0) is attacked equally by (0,0) fg and (2,0) bg.
  const GrayImage img(3, 1, std::uint8_t{10});
  const CellGrid g0 = init_grid(img, SeedSet({{{0, 0}, Label::Foreground}, {{2, 0}, Label::Background}}));
  const auto [g1, changed] = step(img, g0, GrowCutConfig{});
  CHECK(changed == 1);
  CHECK(g1.label(1, 0) == Label::Foreground);
}

TEST_CASE("the strongest attack wins, not the last") {
  // (1,0) sees fg at (0,0) through |10-50| and bg at (2,0) through |10-10|.
  const GrayImage img(3, 1, {50, 10, 10});
  const CellGrid g0 = init_grid(img, SeedSet({{{0, 0}, Label::Foreground}, {{2, 0}, Label::Background}}));
  const auto [g1, changed] = step(img, g0, GrowCutConfig{});
  CHECK(g1.label(1, 0) == Label::Background);
  CHECK(g1.strength(1, 0) == 1.0);
  (void)changed;
}

TEST_CASE("run on a bright disc") {
  BinaryMask truth;
  const GrayImage img = disc_image(&truth);
  const SegmentationResult r = run(img, disc_seeds());
  CHECK(r.converged);
  CHECK(metrics::overlap_stats(r.mask, truth).dsc >= 0.95);

  GrowCutConfig one;
  one.max_iterations = 1;
  const SegmentationResult t = run(img, disc_seeds(), one);
  CHECK_FALSE(t.converged);
  CHECK(t.iterations_used == 1);
}

TEST_CASE("fully seeded grid converges in one step") {
  const GrayImage img(2, 2, {0, 50, 100, 150});
  const SeedSet s({{{0, 0}, Label::Foreground},
                   {{1, 0}, Label::Background},
                   {{0, 1}, Label::Background},
                   {{1, 1}, Label::Foreground}});
  const SegmentationResult r = run(img, s);
  CHECK(r.converged);
  CHECK(r.iterations_used == 1);
  CHECK(r.mask == BinaryMask({2, 2}, std::vector<std::uint8_t>{1, 0, 0, 1}));
}

TEST_CASE("run needs a foreground seed") {
  const GrayImage img(3, 3, std::uint8_t{0});
  CHECK_THROWS_AS(run(img, {}), SeedError);
  CHECK_THROWS_AS(run(img, SeedSet({{{0, 0}, Label::Background}})), SeedError);
}

TEST_CASE("run matches the naive automaton on random images") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 9);
    const int h = 1 + static_cast<int>(rng() % 9);
    const GrayImage img = random_image(rng, w, h, trial % 2 ? 4 : 256);
    std::vector<Seed> seeds;
    std::vector<naive::SeedPoint> pts;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
      const int x = static_cast<int>(rng() % w), y = static_cast<int>(rng() % h);
      const bool taken = std::any_of(pts.begin(), pts.end(), [&](auto& p) { return p.x == x && p.y == y; });
      if (taken) continue;
      const Label l = i == 0 ? Label::Foreground : (rng() % 2 ? Label::Foreground : Label::Background);
      seeds.push_back({{x, y}, l});
      pts.push_back({x, y, static_cast<int>(l)});
    }
    const SegmentationResult r = run(img, SeedSet(seeds));
    const naive::Result ref = naive::growcut(w, h, as_ints(img), pts);
    CHECK(labels_of(r.final_grid) == ref.label);
    CHECK(r.final_grid.strengths == ref.strength);
    CHECK(r.iterations_used == ref.iterations);
    CHECK(r.converged == ref.converged);
  }
}

TEST_CASE("step is independent of visiting order") {
  std::mt19937 rng(8);
  const GrowCutConfig cfg;
  for (int trial = 0; trial < 40; ++trial) {
    const int w = 2 + static_cast<int>(rng() % 12), h = 2 + static_cast<int>(rng() % 12);
    const GrayImage img = random_image(rng, w, h);
    CellGrid g(img.extent());
    for (std::size_t i = 0; i < g.labels.size(); ++i) {
      g.labels[i] = static_cast<Label>(rng() % 3);
      g.strengths[i] = g.labels[i] == Label::Unlabeled ? 0.0 : (rng() % 1000) / 1000.0;
    }
    std::vector<std::size_t> order(g.labels.size());
    std::iota(order.begin(), order.end(), 0);
    CellGrid ref;
    const StepStats s0 = step(img, g, ref, cfg, Kernel::Serial);
    for (int k = 0; k < 5; ++k) {
      std::shuffle(order.begin(), order.end(), rng);
      CellGrid out;
      const StepStats s = step_in_order(img, g, out, cfg, order);
      CHECK(out == ref);
      CHECK(s.label_changes == s0.label_changes);
    }
  }
}

TEST_CASE("parallel and serial kernels agree on large grids") {
  std::mt19937 rng(99);
  for (auto nb : {Neighborhood::Moore8, Neighborhood::VonNeumann4}) {
    GrowCutConfig cfg;
    cfg.neighborhood = nb;
    const GrayImage img = random_image(rng, 97, 83, 6);
    std::vector<Seed> seeds;
    for (int i = 0; i < 40; ++i)
      seeds.push_back({{static_cast<int>(rng() % 97), static_cast<int>(rng() % 83)},
                       i % 2 ? Label::Background : Label::Foreground});
    // drop coordinate collisions with differing labels
    std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.at < b.at; });
    seeds.erase(std::unique(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.at == b.at; }),
                seeds.end());
    const SeedSet s(seeds);
    CHECK(img.extent().area() >= kParallelMinCells);
    const SegmentationResult a = run(img, s, cfg, Kernel::Serial);
    const SegmentationResult b = run(img, s, cfg, Kernel::Parallel);
    CHECK(a.final_grid == b.final_grid);
    CHECK(a.iterations_used == b.iterations_used);
  }
}

TEST_CASE("strengths never decrease and seeds keep their labels") {
  std::mt19937 rng(4);
  const GrowCutConfig cfg;
  for (int trial = 0; trial < 30; ++trial) {
    const GrayImage img = random_image(rng, 12, 10);
    const SeedSet s({{{1, 1}, Label::Foreground}, {{10, 8}, Label::Background}, {{5, 5}, Label::Foreground}});
    CellGrid g = init_grid(img, s);
    for (int it = 0; it < 50; ++it) {
      CellGrid next;
      const StepStats st = step(img, g, next, cfg);
      for (std::size_t i = 0; i < g.strengths.size(); ++i) CHECK(next.strengths[i] >= g.strengths[i]);
      for (const Seed& seed : s) {
        CHECK(next.label(seed.at.x, seed.at.y) == seed.label);
        CHECK(next.strength(seed.at.x, seed.at.y) == 1.0);
      }
      g = std::move(next);
      if (st.fixed_point()) break;
    }
  }
}

TEST_CASE("foreground_mask maps only foreground") {
  CellGrid g(Extent{3, 1});
  g.labels = {Label::Foreground, Label::Background, Label::Unlabeled};
  CHECK(foreground_mask(g) == BinaryMask({3, 1}, std::vector<std::uint8_t>{1, 0, 0}));
}
