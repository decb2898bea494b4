// Serial reference step vs the OpenMP step on mid-run grids.

#include <benchmark/benchmark.h>

#include <cmath>

#include "growcut/fuzzy.hpp"
#include "growcut/growcut.hpp"

using namespace growcut;

namespace {

GrayImage blob_image(int n) {
  GrayImage img(n, n, std::uint8_t{40});
  const double c = (n - 1) / 2.0, r = n * 0.3;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const double d = std::hypot(x - c, y - c);
      const int noise = static_cast<int>((x * 7919 + y * 104729) % 21) - 10;
      img.set(x, y, static_cast<std::uint8_t>((d <= r ? 200 : 40) + noise));
    }
  return img;
}

// A grid a few generations into a run, so both kernels see mixed labels.
CellGrid warm_grid(const GrayImage& img) {
  const int n = img.width();
  SeedSet seeds({{{n / 2, n / 2}, Label::Foreground}, {{1, 1}, Label::Background},
                 {{n - 2, n - 2}, Label::Background}});
  GrowCutConfig cfg;
  CellGrid a = init_grid(img, seeds), b(a.dims);
  for (int i = 0; i < n / 8; ++i) {
    step(img, a, b, cfg, Kernel::Serial);
    std::swap(a, b);
  }
  return a;
}

void run_step(benchmark::State& state, Kernel kernel) {
  const GrayImage img = blob_image(static_cast<int>(state.range(0)));
  const CellGrid in = warm_grid(img);
  CellGrid out(in.dims);
  GrowCutConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step(img, in, out, cfg, kernel));
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.extent().area()));
}

void BM_StepSerial(benchmark::State& s) { run_step(s, Kernel::Serial); }
void BM_StepParallel(benchmark::State& s) { run_step(s, Kernel::Parallel); }

void run_fuzzy_step(benchmark::State& state, Kernel kernel) {
  const int n = static_cast<int>(state.range(0));
  const GrayImage img = blob_image(n);
  fuzzy::FuzzyGrowCutConfig cfg;
  const SeedSet seeds({{{n / 2 - n / 4, n / 2}, Label::Foreground},
                       {{n / 2 + n / 4, n / 2}, Label::Foreground},
                       {{n / 2, n / 2 - n / 4}, Label::Foreground},
                       {{n / 2, n / 2 + n / 4}, Label::Foreground}});
  const auto model = fuzzy::fit_model(seeds, cfg);
  const auto outside = fuzzy::frontier_map(model, img.extent());
  CellGrid a = fuzzy::init_fuzzy(img, model), b(a.dims);
  for (int i = 0; i < n / 8; ++i) {
    fuzzy::step(img, outside, a, b, cfg, Kernel::Serial);
    std::swap(a, b);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fuzzy::step(img, outside, a, b, cfg, kernel));
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.extent().area()));
}

void BM_FuzzyStepSerial(benchmark::State& s) { run_fuzzy_step(s, Kernel::Serial); }
void BM_FuzzyStepParallel(benchmark::State& s) { run_fuzzy_step(s, Kernel::Parallel); }

void BM_RunSerial(benchmark::State& state) {
  const GrayImage img = blob_image(static_cast<int>(state.range(0)));
  const int n = img.width();
  SeedSet seeds({{{n / 2, n / 2}, Label::Foreground}, {{1, 1}, Label::Background}});
  for (auto _ : state) benchmark::DoNotOptimize(run(img, seeds, {}, Kernel::Serial));
}

void BM_RunParallel(benchmark::State& state) {
  const GrayImage img = blob_image(static_cast<int>(state.range(0)));
  const int n = img.width();
  SeedSet seeds({{{n / 2, n / 2}, Label::Foreground}, {{1, 1}, Label::Background}});
  for (auto _ : state) benchmark::DoNotOptimize(run(img, seeds, {}, Kernel::Parallel));
}

}  // namespace

BENCHMARK(BM_StepSerial)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_StepParallel)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FuzzyStepSerial)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FuzzyStepParallel)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RunSerial)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunParallel)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
