#include <chirpmem/adiabatic.hpp>
#include <chirpmem/dynamics.hpp>
#include <chirpmem/sequence.hpp>

#include <benchmark/benchmark.h>

#include <vector>

using namespace chirpmem;

namespace {

ChirpedPulse pulse()
{
    return ChirpedPulse::make(16.0, 1.0, -5.0, -30.0);
}

void BM_Eigensystem(benchmark::State& state)
{
    double delta = -12.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(instantaneous_eigensystem(8.0, delta, 10.0, 1.0));
        delta = delta > 12.0 ? -12.0 : delta + 1e-3;
    }
}
BENCHMARK(BM_Eigensystem);

void BM_NumericPulsePropagator(benchmark::State& state)
{
    const auto p = pulse();
    for (auto _ : state) {
        benchmark::DoNotOptimize(pulse_propagator({2.0, 10.0, 1.0}, p));
    }
}
BENCHMARK(BM_NumericPulsePropagator)->Unit(benchmark::kMillisecond);

void BM_AnalyticPulsePropagator(benchmark::State& state)
{
    const auto p = pulse();
    for (auto _ : state) {
        benchmark::DoNotOptimize(analytic_propagator(p, {2.0, 10.0, 1.0}));
    }
}
BENCHMARK(BM_AnalyticPulsePropagator)->Unit(benchmark::kMillisecond);

// One atom through one pulse on the fixed grid used by the propagation solver.
void BM_FixedStepper(benchmark::State& state)
{
    const auto p = pulse();
    const auto steps = static_cast<std::size_t>(state.range(0));
    const double dt = 2.0 * p.half_window / static_cast<double>(steps);
    std::vector<cplx> nodes(steps + 1), mids(steps);
    for (std::size_t k = 0; k <= steps; ++k) {
        nodes[k] = field_at(p, p.window_begin() + dt * static_cast<double>(k));
        if (k < steps) {
            mids[k] = field_at(p, p.window_begin() + dt * (static_cast<double>(k) + 0.5));
        }
    }
    const SampledField field{dt, nodes, mids};
    const FixedStepStepper stepper(10.0, 1.0, dt, steps);
    for (auto _ : state) {
        Vector3c x(1.0, 0.0, 0.0);
        stepper.evolve(x, 2.0, field);
        benchmark::DoNotOptimize(x);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(steps));
}
BENCHMARK(BM_FixedStepper)->Arg(2048)->Arg(8192);

}  // namespace
BENCHMARK_MAIN();
