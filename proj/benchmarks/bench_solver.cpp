#include <benchmark/benchmark.h>

#include <numbers>

#include "epns/diagnostics.hpp"
#include "epns/solver.hpp"

namespace {

epns::SystemState initial(std::size_t n) {
    const auto grid = epns::SpectralGrid::make(n, 2.0 * std::numbers::pi);
    epns::InitialDataSpec spec;
    spec.amplitude = 1e-3;
    return epns::make_initial(grid, spec);
}

void BM_NonlinearTerms(benchmark::State& state) {
    const auto s = initial(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(epns::nonlinear_terms(s));
}
BENCHMARK(BM_NonlinearTerms)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& state) {
    auto s = initial(static_cast<std::size_t>(state.range(0)));
    const auto scheme = state.range(1) == 1 ? epns::Scheme::ETD1 : epns::Scheme::ETD2RK;
    epns::Integrator integrator(s.grid_ptr(), scheme, epns::Model::EPNS);
    for (auto _ : state) integrator.step(s, 1e-2);
}
BENCHMARK(BM_Step)->Args({32, 1})->Args({32, 2})->Unit(benchmark::kMillisecond);

void BM_Record(benchmark::State& state) {
    const auto s = initial(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(epns::record(s));
}
BENCHMARK(BM_Record)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_StabilityCap(benchmark::State& state) {
    const auto s = initial(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(epns::stability_cap(s));
}
BENCHMARK(BM_StabilityCap)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
