#include <benchmark/benchmark.h>

#include <cmath>

#include "epns/propagator.hpp"
#include "epns/spectral_field.hpp"
#include "epns/spectral_ops.hpp"

namespace {

epns::SpectralField smooth_field(const epns::GridPtr& grid) {
    return epns::transform_forward(grid, epns::sample(*grid, [](double x, double y, double z) {
                                       return std::sin(x) * std::cos(2.0 * y) + 0.3 * std::cos(z + x);
                                   }));
}

void BM_TransformRoundTrip(benchmark::State& state) {
    const auto grid = epns::SpectralGrid::make(static_cast<std::size_t>(state.range(0)), 2.0 * M_PI);
    const auto f = smooth_field(grid);
    for (auto _ : state) {
        auto samples = epns::transform_inverse(f);
        benchmark::DoNotOptimize(epns::transform_forward(grid, samples));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid->size()));
}
BENCHMARK(BM_TransformRoundTrip)->Arg(16)->Arg(32)->Arg(64);

void BM_LerayProject(benchmark::State& state) {
    const auto grid = epns::SpectralGrid::make(static_cast<std::size_t>(state.range(0)), 2.0 * M_PI);
    const auto f = smooth_field(grid);
    const epns::VectorSpectralField v(f, f, f);
    for (auto _ : state) benchmark::DoNotOptimize(epns::leray_project(v));
}
BENCHMARK(BM_LerayProject)->Arg(32)->Arg(64);

void BM_PropagatorApply(benchmark::State& state) {
    const auto grid = epns::SpectralGrid::make(static_cast<std::size_t>(state.range(0)), 2.0 * M_PI);
    const epns::PropagatorTable table(grid, 1e-2, epns::Model::EPNS);
    auto s = epns::SystemState::zero(grid);
    s.n = smooth_field(grid);
    for (auto _ : state) {
        table.apply(s.n, s.u, s.v);
        benchmark::ClobberMemory();
    }
}
BENCHMARK(BM_PropagatorApply)->Arg(32)->Arg(64);

void BM_PropagatorTableBuild(benchmark::State& state) {
    const auto grid = epns::SpectralGrid::make(static_cast<std::size_t>(state.range(0)), 2.0 * M_PI);
    for (auto _ : state) benchmark::DoNotOptimize(epns::PropagatorTable(grid, 1e-2, epns::Model::EPNS));
}
BENCHMARK(BM_PropagatorTableBuild)->Arg(32);

}  // namespace
