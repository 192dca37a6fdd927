#include <benchmark/benchmark.h>

#include "attestpo/harness.hpp"
#include "attestpo/mekf.hpp"

using namespace attestpo;

namespace {

MonteCarloConfig study(int threads) {
  MonteCarloConfig cfg;
  cfg.sim.duration = 2.0;
  cfg.algorithms = default_algorithms(cfg.sim);
  cfg.runs = 8;
  cfg.threads = threads;
  return cfg;
}

void BM_MonteCarloSerial(benchmark::State& state) {
  const MonteCarloConfig cfg = study(1);
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_serial(cfg));
}

void BM_MonteCarloParallel(benchmark::State& state) {
  const MonteCarloConfig cfg = study(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo(cfg));
}

void BM_Track(benchmark::State& state) {
  ConingConfig sim = default_coning_config();
  sim.duration = 2.0;
  const SimulatedData d = synthesize(sim);
  const MonteCarloConfig mc;
  const WindowPrior prior = monte_carlo_prior(mc, d, 1);
  const AlgorithmSpec spec = default_algorithms(sim)[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(spec.name);
  for (auto _ : state) benchmark::DoNotOptimize(run_algorithm(spec, d.samples, prior));
}

}  // namespace

BENCHMARK(BM_MonteCarloSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloParallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Track)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
