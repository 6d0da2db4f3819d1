// Serial reference vs OpenMP sweep over the poisoning scenario.

#include <benchmark/benchmark.h>

#include "wfl/sim/sweep.hpp"

namespace {

wfl::sim::ScenarioConfig poisoning_scenario() {
    wfl::sim::ScenarioConfig c;
    c.num_honest_clients = 10;
    c.warmup_rounds = 11;
    c.rounds = 20;
    c.adversaries.push_back(wfl::sim::Poisoner{50.0});
    return c;
}

void BM_SweepSerial(benchmark::State& state) {
    const auto config = poisoning_scenario();
    const auto seeds = wfl::sim::sweep_seeds(1, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(wfl::sim::run_sweep_serial(config, seeds));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepParallel(benchmark::State& state) {
    const auto config = poisoning_scenario();
    const auto seeds = wfl::sim::sweep_seeds(1, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(wfl::sim::run_sweep(config, seeds));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(8)->Arg(50)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(8)->Arg(50)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
