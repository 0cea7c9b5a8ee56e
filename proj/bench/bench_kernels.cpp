// Parallel kernels against their serial references.

#include "dlambda/dynamics.hpp"
#include "dlambda/optimize.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

using namespace dlambda;

namespace {

struct PulseCase {
    SystemParams params = balanced(50.0, 10.0, 1.0);
    PulseSpec probe, signal;
    SimGrid grid;

    explicit PulseCase(std::size_t n_z)
    {
        probe = {PulseShape::Square, 1.0, 10.0, 160.0, 5.0};
        signal = probe;
        grid.n_z = n_z;
        grid.t_end = 220.0;
        grid.record_dt = 1.0;
        grid.z_stride = 20;
    }
};

SweepSpec sweep_case()
{
    SweepSpec s;
    s.base = balanced(0.0, 0.0, 0.0);
    s.alpha = linspace(10.0, 100.0, 10);
    s.delta = linspace(-30.0, 30.0, 31);
    s.phi_r = linspace(0.0, 2.0 * std::numbers::pi, 8, false);
    return s;
}

void BM_simulate(benchmark::State& state)
{
    const PulseCase c(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(simulate(c.params, c.probe, c.signal, c.grid));
}

void BM_simulate_reference(benchmark::State& state)
{
    const PulseCase c(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_reference(c.params, c.probe, c.signal, c.grid));
}

void BM_sweep(benchmark::State& state)
{
    const auto s = sweep_case();
    for (auto _ : state) benchmark::DoNotOptimize(sweep(s));
}

void BM_sweep_serial(benchmark::State& state)
{
    const auto s = sweep_case();
    for (auto _ : state) benchmark::DoNotOptimize(sweep_serial(s));
}

} // namespace

BENCHMARK(BM_simulate)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_simulate_reference)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
