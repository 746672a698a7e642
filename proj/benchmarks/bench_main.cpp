#include <benchmark/benchmark.h>

#include "pikm/baselines.hpp"
#include "pikm/optimizer.hpp"
#include "pikm/simulator.hpp"

namespace {

using namespace pikm;

void BM_DeriveBest(benchmark::State& state) {
  OptimizerRequest req;
  req.eta_target = state.range(0) / 1000.0;
  for (auto _ : state) {
    auto sol = derive_best(req);
    benchmark::DoNotOptimize(sol.d_m);
  }
}
BENCHMARK(BM_DeriveBest)->Arg(10)->Arg(50)->Arg(200);

void BM_SweepExact(benchmark::State& state) {
  OptimizerRequest req;
  req.eta_target = state.range(0) / 1000.0;
  auto sol = derive_best(req);
  for (auto _ : state) {
    auto curve = sweep_offsets(sol.config, sol.config.d_a, {});
    benchmark::DoNotOptimize(curve.worst_case);
  }
}
BENCHMARK(BM_SweepExact)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SweepDenseGrid(benchmark::State& state) {
  OptimizerRequest req;
  req.eta_target = 0.1;
  auto sol = derive_best(req);
  SweepOptions opts;
  opts.refine_breakpoints = false;
  for (auto _ : state) {
    auto curve = sweep_offsets(sol.config, state.range(0), opts);
    benchmark::DoNotOptimize(curve.mean);
  }
}
BENCHMARK(BM_SweepDenseGrid)
    ->Arg(100'000)
    ->Arg(10'000)
    ->Arg(1'000)
    ->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  OptimizerRequest req;
  req.eta_target = 0.09;
  auto sol = derive_best(req);
  MonteCarloOptions mc;
  mc.collisions = true;
  mc.skew_ppm_range = 20;
  mc.horizon = 5 * kNanosPerSecond;
  for (auto _ : state) {
    auto outcomes = monte_carlo(sol.config, state.range(0), 7, mc);
    benchmark::DoNotOptimize(outcomes.size());
  }
}
BENCHMARK(BM_MonteCarlo)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_GainTable(benchmark::State& state) {
  std::vector<double> grid;
  for (int i = 10; i <= 200; i += state.range(0)) grid.push_back(i / 1000.0);
  RadioParams radio;
  for (auto _ : state) {
    auto table = gain_table(grid, radio, 10 * kNanosPerMilli);
    benchmark::DoNotOptimize(table.size());
  }
}
BENCHMARK(BM_GainTable)->Arg(10)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
