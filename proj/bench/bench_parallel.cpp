#include <benchmark/benchmark.h>

#include <vector>

#include "presto/harness.hpp"
#include "presto/scenario.hpp"
#include "presto/tuner.hpp"

using namespace presto;

namespace {

Scenario short_run() {
  Scenario sc = reference_scenario(ScenarioKind::tsmc);
  sc.horizon = 0.5;
  return sc;
}

std::vector<std::vector<double>> positions(int n) {
  std::vector<std::vector<double>> out;
  for (int i = 0; i < n; ++i) out.push_back({1.0 + 0.25 * i, 5.0 + 0.5 * i});
  return out;
}

void swarm_fitness(benchmark::State& state, Execution exec) {
  const Scenario base = short_run();
  const std::vector<TunableGain> gains{TunableGain::delta, TunableGain::beta1};
  const Fitness f = [&](std::span<const double> v) { return fitness_settling_time(v, base, gains); };
  const auto pos = positions(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_swarm(pos, f, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void compare_runs(benchmark::State& state, Execution exec) {
  std::vector<Scenario> scs;
  for (auto k : {ScenarioKind::tsmc, ScenarioKind::tsmc_saturated, ScenarioKind::adaptive_tsmc_saturated,
                 ScenarioKind::smc_baseline}) {
    Scenario sc = reference_scenario(k);
    sc.horizon = 1.0;
    scs.push_back(sc);
  }
  for (auto _ : state) benchmark::DoNotOptimize(compare_controllers(scs, {}, exec));
}

}  // namespace

BENCHMARK_CAPTURE(swarm_fitness, serial, Execution::serial)->Arg(8)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(swarm_fitness, parallel, Execution::parallel)->Arg(8)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(compare_runs, serial, Execution::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(compare_runs, parallel, Execution::parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
