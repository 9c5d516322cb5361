#include <benchmark/benchmark.h>

#include "qbackbone/engine.hpp"
#include "qbackbone/event_queue.hpp"
#include "qbackbone/scenario.hpp"

namespace {

using namespace qbackbone;

void BM_DefaultScenario(benchmark::State& state) {
  ScenarioConfig config = default_scenario();
  std::uint64_t delivered = 0;
  for (auto _ : state) {
    const RunResult r = run(config);
    delivered += r.totals.qubits_delivered;
    ++config.seed;
  }
  benchmark::DoNotOptimize(delivered);
}
BENCHMARK(BM_DefaultScenario)->Unit(benchmark::kMillisecond);

void BM_AllSourcesFiniteMemory(benchmark::State& state) {
  ScenarioConfig config = default_scenario();
  config.sources.clear();
  for (const auto& id : preset_source_ids()) config.sources.push_back(*preset_source(id));
  config.policy = SourcePolicy{PolicyKind::all_sources, ""};
  config.memory_capacity = MemoryCapacity::slots(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(config).totals.qubits_delivered);
    ++config.seed;
  }
}
BENCHMARK(BM_AllSourcesFiniteMemory)->Arg(20)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_RateSchedule(benchmark::State& state) {
  ScenarioConfig config = default_scenario();
  config.sources = {*preset_source("Micius"), *preset_source("fiber-dark")};
  config.policy = SourcePolicy{PolicyKind::best_source, ""};
  for (auto _ : state) benchmark::DoNotOptimize(build_rate_schedule(config));
}
BENCHMARK(BM_RateSchedule);

void BM_EventQueueChurn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    EventQueue q;
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) q.schedule(t += 1e-3, EventKind::channel_step);
    while (!q.empty()) benchmark::DoNotOptimize(q.pop());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_EventQueueChurn)->Arg(1 << 10)->Arg(1 << 16);

}  // namespace
BENCHMARK_MAIN();
