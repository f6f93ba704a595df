// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <vector>

#include "hetquant/exact.hpp"
#include "hetquant/montecarlo.hpp"

using namespace hetquant;

namespace {

HeteroSample two_groups(std::size_t n1, std::size_t n2) {
  std::vector<ScaledLaw> laws(n1, ScaledLaw(BaseKind::Normal, 1000.0));
  laws.insert(laws.end(), n2, ScaledLaw(BaseKind::Normal, 1.0));
  return HeteroSample(std::move(laws));
}

McConfig median_config(std::size_t replicates) {
  return {two_groups(80, 16), replicates, 1, Statistic::median_abs()};
}

std::vector<double> threshold_grid(std::size_t points) {
  std::vector<double> ts(points);
  for (std::size_t i = 0; i < points; ++i) ts[i] = -50.0 + 100.0 * static_cast<double>(i) / static_cast<double>(points);
  return ts;
}

void BM_MonteCarloSerial(benchmark::State& state) {
  const auto config = median_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_serial(config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MonteCarloParallel(benchmark::State& state) {
  const auto config = median_config(static_cast<std::size_t>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(run(config, threads));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TailGridSerial(benchmark::State& state) {
  const auto sample = two_groups(static_cast<std::size_t>(state.range(0)), 100);
  const auto ts = threshold_grid(64);
  for (auto _ : state) benchmark::DoNotOptimize(upper_tail_grid_serial(sample, 0.5, ts));
}

void BM_TailGridParallel(benchmark::State& state) {
  const auto sample = two_groups(static_cast<std::size_t>(state.range(0)), 100);
  const auto ts = threshold_grid(64);
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(upper_tail_grid(sample, 0.5, ts, threads));
}

}  // namespace

BENCHMARK(BM_MonteCarloSerial)->Arg(5000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MonteCarloParallel)
    ->ArgsProduct({{5000}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_TailGridSerial)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TailGridParallel)
    ->ArgsProduct({{400, 1600}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
