// Serial reference against OpenMP replicate loops for the hot kernels.

#include "scelab/metrics.hpp"
#include "scelab/oracles.hpp"
#include "scelab/payments.hpp"

#include <benchmark/benchmark.h>

using namespace scelab;

namespace {

Execution policy(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void BM_Integrity(benchmark::State& state, Measurement m)
{
    const auto cfg = paper_base();
    for (auto _ : state)
        benchmark::DoNotOptimize(measurement_integrity(cfg, m, 0.6, 64, Seed(1), policy(state)).value);
    state.SetItemsProcessed(state.iterations() * 64);
    state.counters["threads"] = state.range(0) ? available_threads() : 1;
}

void BM_Calibration(benchmark::State& state)
{
    const auto cfg = paper_base();
    CalibrationOptions o;
    o.replicates = 64;
    o.execution = policy(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(calibrate_borda(cfg, Measurement::output_agreement(), 0.6, o, Seed(2)).total_payment);
    state.SetItemsProcessed(state.iterations() * 64);
}

void BM_Sensitivity(benchmark::State& state)
{
    const auto cfg = paper_base();
    SensitivityOptions o;
    o.iterations = 200;
    o.execution = policy(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(sensitivity_proxy(cfg, Measurement::correlated_agreement(), 0.6, o, Seed(3)).value);
    state.SetItemsProcessed(state.iterations() * 200);
}

void BM_Example1(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(example1_simulate(0.6, 1.0, 100000, Seed(4), 0.01, policy(state)).total_payment);
    state.SetItemsProcessed(state.iterations() * 100000);
}

}  // namespace

// Arg 0 is the serial reference, 1 the parallel path.
BENCHMARK_CAPTURE(BM_Integrity, spot_check, Measurement::spot_check(50))->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Integrity, output_agreement, Measurement::output_agreement())->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Integrity, dmi, Measurement::determinant_mi())->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Calibration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sensitivity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Example1)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
