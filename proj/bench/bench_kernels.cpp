// Serial reference against OpenMP kernels.

#include <benchmark/benchmark.h>

#include "hdoa/harness.hpp"

namespace {

hdoa::ExperimentConfig mc_config() {
  hdoa::ExperimentConfig c;
  c.m_total = 16;
  c.m_per = 2;
  c.kappa = 0.25;
  c.theta0_deg = 23.0;
  c.trials = 500;
  c.sweep = hdoa::parse_sweep("snr_db=0:20:10");
  return c;
}

hdoa::ValidationGrid small_grid() {
  hdoa::ValidationGrid g;
  g.m_total = {16, 32};
  return g;
}

void BM_MonteCarloSerial(benchmark::State& state) {
  const auto c = mc_config();
  for (auto _ : state) benchmark::DoNotOptimize(hdoa::monte_carlo_rmse_serial(c));
}

void BM_MonteCarloParallel(benchmark::State& state) {
  const auto c = mc_config();
  for (auto _ : state)
    benchmark::DoNotOptimize(hdoa::monte_carlo_rmse(c, static_cast<int>(state.range(0))));
}

void BM_ValidateSerial(benchmark::State& state) {
  const auto g = small_grid();
  for (auto _ : state) benchmark::DoNotOptimize(hdoa::validate_oracle_serial(g));
}

void BM_ValidateParallel(benchmark::State& state) {
  const auto g = small_grid();
  for (auto _ : state)
    benchmark::DoNotOptimize(hdoa::validate_oracle(g, static_cast<int>(state.range(0))));
}

} // namespace

BENCHMARK(BM_MonteCarloSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MonteCarloParallel)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ValidateSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ValidateParallel)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
