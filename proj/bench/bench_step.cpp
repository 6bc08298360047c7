// Serial reference vs OpenMP node-update kernel for one scheme step on the Burgers benchmark.
#include <benchmark/benchmark.h>

#include "fsl/characteristics.hpp"
#include "fsl/problems.hpp"

namespace {

using fsl::Execution;
using fsl::Interpolation;

void run_step(benchmark::State& state, Interpolation interp, Execution exec) {
    const auto nx = static_cast<std::size_t>(state.range(0));
    const fsl::BurgersBenchmark bench;
    const fsl::PeriodicGrid grid = fsl::uniform_grid(nx);
    const fsl::NodalState start = fsl::sample_state(grid, fsl::exact_at(bench, 0.0), interp);
    fsl::SchemeConfig cfg;
    cfg.interp = interp;
    const fsl::Flux flux = fsl::burgers_flux();
    for (auto _ : state) {
        auto result = fsl::step(start, flux, cfg, exec);
        benchmark::DoNotOptimize(result.first.values.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(nx));
}

void BM_StepSerial_Spline3(benchmark::State& s) { run_step(s, Interpolation::spline(2), Execution::serial()); }
void BM_StepOpenMP_Spline3(benchmark::State& s) { run_step(s, Interpolation::spline(2), Execution::openmp()); }
void BM_StepSerial_Hermite5(benchmark::State& s) { run_step(s, Interpolation::hermite(3), Execution::serial()); }
void BM_StepOpenMP_Hermite5(benchmark::State& s) { run_step(s, Interpolation::hermite(3), Execution::openmp()); }

BENCHMARK(BM_StepSerial_Spline3)->RangeMultiplier(4)->Range(1000, 16000);
BENCHMARK(BM_StepOpenMP_Spline3)->RangeMultiplier(4)->Range(1000, 16000)->UseRealTime();
BENCHMARK(BM_StepSerial_Hermite5)->RangeMultiplier(4)->Range(1000, 16000);
BENCHMARK(BM_StepOpenMP_Hermite5)->RangeMultiplier(4)->Range(1000, 16000)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
