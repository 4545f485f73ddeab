#include "rumor/ensemble.hpp"
#include "rumor/integrator.hpp"
#include "rumor/rng.hpp"

#include <benchmark/benchmark.h>

using namespace rumor;

static void BM_WienerIncrements(benchmark::State& state)
{
    std::uint64_t step = 0;
    for (auto _ : state) benchmark::DoNotOptimize(wiener_increments(42, step++, 0.1));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_WienerIncrements);

static void BM_Integrate(benchmark::State& state)
{
    ModelParams p = ModelParams{}.with_reproduction_number(2.0);
    p.tau = static_cast<double>(state.range(0));
    const auto history = HistoryFunction::seeded_spreaders(0.005, 1.0);
    const IntegratorConfig cfg{};
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(integrate(p, history, cfg, seed++));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.steps()));
}
BENCHMARK(BM_Integrate)->Arg(0)->Arg(10)->Unit(benchmark::kMicrosecond);

static void BM_Ensemble(benchmark::State& state)
{
    const ModelParams p = ModelParams{}.with_reproduction_number(2.0);
    const auto history = HistoryFunction::seeded_spreaders(0.005, 1.0);
    EnsembleOptions o;
    o.run_count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(p, history, IntegratorConfig{}, o));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ensemble)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
