#include <benchmark/benchmark.h>

#include <cmath>
#include <limits>

#include "gedge/abm.hpp"
#include "gedge/fredholm.hpp"
#include "gedge/ginibre.hpp"
#include "gedge/kernel.hpp"
#include "gedge/walk.hpp"

namespace {

void BM_KernelT(benchmark::State& state) {
  double x = -3.0, acc = 0.0;
  for (auto _ : state) {
    acc += gedge::kernel_T(x, 0.5 - x);
    x += 1e-6;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_KernelT);

void BM_Discretize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gedge::discretize(-4.0, n));
}
BENCHMARK(BM_Discretize)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_CdfAt(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gedge::cdf_at(-4.0, n));
}
BENCHMARK(BM_CdfAt)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_LadderPath(benchmark::State& state) {
  gedge::WalkConfig cfg;
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gedge::simulate_path(-std::numeric_limits<double>::infinity(),
                                                  gedge::StopRule::ladder, cfg, i++));
  }
}
BENCHMARK(BM_LadderPath);

void BM_ExitPath(benchmark::State& state) {
  gedge::WalkConfig cfg;
  const double t = -static_cast<double>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gedge::simulate_path(t, gedge::StopRule::first_exit, cfg, i++));
  }
}
BENCHMARK(BM_ExitPath)->Arg(2)->Arg(25)->Arg(100);

void BM_GinibreSchur(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gedge::sample_ginibre(n, seed++));
}
BENCHMARK(BM_GinibreSchur)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_AbmRun(benchmark::State& state) {
  gedge::AbmConfig cfg;
  cfg.n_runs = 1000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gedge::rightmost_law(cfg, {}));
    ++cfg.seed;
  }
}
BENCHMARK(BM_AbmRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
