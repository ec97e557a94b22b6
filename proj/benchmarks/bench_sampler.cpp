#include <benchmark/benchmark.h>

#include "specgap/catalog.hpp"
#include "specgap/sampler.hpp"

using namespace specgap;

namespace {

void BM_SampleMu(benchmark::State& state) {
    const auto f = make_family({FamilyKind::gaussian, 3, 2.0, 0.0, WeightChoice::unit});
    const auto count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_mu(f.measure, count, 7).points.data());
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleMu)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_RayleighEstimate(benchmark::State& state) {
    const auto f = make_family({FamilyKind::generalized_cauchy, 3, 2.0, 4.0, WeightChoice::one_plus_r2});
    const auto batch = sample_mu(f.measure, 100000, 7);
    const auto field = radial_quadratic_field();
    for (auto _ : state) benchmark::DoNotOptimize(rayleigh_estimate(batch, field, f.weight).ratio);
}
BENCHMARK(BM_RayleighEstimate)->Unit(benchmark::kMillisecond);

}  // namespace
