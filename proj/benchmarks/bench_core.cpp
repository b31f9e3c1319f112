#include "robustpower/cvar.hpp"
#include "robustpower/fading.hpp"
#include "robustpower/policy.hpp"
#include "robustpower/solver.hpp"
#include "robustpower/var_levels.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace robustpower;

namespace {

void BM_OptimalPower(benchmark::State& state) {
    RandomStream rng(1);
    const auto h = FadingModel::rayleigh().sample(rng, 4096);
    std::size_t k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimal_power(h[k++ & 4095], 1.0, 0.1, 0.8, 2.0, 3.0));
    }
}
BENCHMARK(BM_OptimalPower);

void BM_RayleighSelection(benchmark::State& state) {
    const RayleighGain gains(1.0);
    double z = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gains.expected_selection(z, 8.0, 2.0));
        z = z < 7.5 ? z + 0.01 : 0.5;
    }
}
BENCHMARK(BM_RayleighSelection);

void BM_SolveVarLevelAnalytic(benchmark::State& state) {
    const RayleighGain gains(1.0);
    const VarLevelParams params{1.0, 0.05, 0.8, 2.0};
    for (auto _ : state) benchmark::DoNotOptimize(solve_var_level(params, gains).z);
}
BENCHMARK(BM_SolveVarLevelAnalytic);

void BM_SolveVarLevelSampled(benchmark::State& state) {
    RandomStream rng(2);
    const auto gains = SampledGain::draw(FadingModel::rayleigh(), rng,
                                         static_cast<std::size_t>(state.range(0)));
    const VarLevelParams params{1.0, 0.05, 0.8, 2.0};
    for (auto _ : state) benchmark::DoNotOptimize(solve_var_level(params, gains).z);
}
BENCHMARK(BM_SolveVarLevelSampled)->Arg(10000)->Arg(100000)->Arg(1000000);

void BM_EmpiricalCvar(benchmark::State& state) {
    RandomStream rng(3);
    const auto x = FadingModel::rayleigh().sample(rng, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(empirical_cvar(x, 0.8));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmpiricalCvar)->Arg(1000)->Arg(40000);

void BM_SolverIterations(benchmark::State& state) {
    const std::vector<TerminalConfig> terminals{{1.0, 0.9, 1.0 / 3}, {2.0, 0.85, 1.0 / 3},
                                                {3.0, 0.8, 1.0 / 3}};
    SolverConfig config;
    config.iterations = 10000;
    config.z_resolve_period = 0;
    config.mode = state.range(0) == 0 ? VarLevelMode::ModelBased : VarLevelMode::ModelFree;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            run(config, terminals, FadingModel::rayleigh()).outcome.final_duals.mu);
    }
    state.SetItemsProcessed(state.iterations() * 10000);
    state.SetLabel(to_string(config.mode));
}
BENCHMARK(BM_SolverIterations)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
