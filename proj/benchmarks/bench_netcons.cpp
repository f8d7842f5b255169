#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "netcons/analysis.hpp"
#include "netcons/plant.hpp"
#include "netcons/scenario.hpp"
#include "netcons/simulation.hpp"

using namespace netcons;

static void BM_RunCase(benchmark::State& state) {
    auto s = builtin_case(static_cast<int>(state.range(0)));
    s.horizon = state.range(1);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        auto r = run(s, seed++);
        benchmark::DoNotOptimize(r.summary.final_spread);
    }
    state.SetItemsProcessed(state.iterations() * s.horizon);
}
BENCHMARK(BM_RunCase)->Args({1, 1000})->Args({1, 10000})->Args({1, 100000})->Args({3, 100000})->Unit(benchmark::kMillisecond);

static void BM_PlantStep(benchmark::State& state) {
    const auto spec = builtin_case(1).plants[3];
    AgentPlant plant(state.range(0) ? PlantKind::Wiener : PlantKind::Hammerstein, spec.C, spec.D, spec.f);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> inputs(1024);
    for (auto& x : inputs) x = u(rng);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(plant.step(inputs[i++ & 1023]));
    }
}
BENCHMARK(BM_PlantStep)->Arg(0)->Arg(1);

static void BM_VerifyRecursion(benchmark::State& state) {
    auto s = builtin_case(1);
    s.horizon = state.range(0);
    const auto r = run(s, 7);
    const auto model = system_model(s);
    for (auto _ : state) {
        const auto check = verify_centralized_recursion(build_auxiliary(r.log, model), model);
        benchmark::DoNotOptimize(check.max_abs_residual);
    }
}
BENCHMARK(BM_VerifyRecursion)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_ConsensusPoint(benchmark::State& state) {
    const auto model = system_model(builtin_case(2));
    double c = -5.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(consensus_point(model.gains, c).b);
        c += 1e-3;
    }
}
BENCHMARK(BM_ConsensusPoint);

BENCHMARK_MAIN();
