#include <benchmark/benchmark.h>

#include "specgap/catalog.hpp"
#include "specgap/eigensolver.hpp"

using namespace specgap;

namespace {

void BM_SpectralGapGaussian(benchmark::State& state) {
    const auto f = make_family({FamilyKind::gaussian, static_cast<int>(state.range(0)), 2.0, 0.0, WeightChoice::unit});
    for (auto _ : state) benchmark::DoNotOptimize(spectral_gap(f.measure, f.weight).value);
}
BENCHMARK(BM_SpectralGapGaussian)->Arg(3)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SpectralGapCauchy(benchmark::State& state) {
    const auto f = make_family({FamilyKind::generalized_cauchy, 3, 2.0, state.range(0) / 10.0, WeightChoice::one_plus_r2});
    for (auto _ : state) benchmark::DoNotOptimize(spectral_gap(f.measure, f.weight).value);
}
BENCHMARK(BM_SpectralGapCauchy)->Arg(16)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_SturmBisection(benchmark::State& state) {
    const auto f = make_family({FamilyKind::uniform_ball, 4, 2.0, 0.0, WeightChoice::unit});
    const auto d = discretize(f.measure, f.weight, GridSpec{static_cast<int>(state.range(0))});
    for (auto _ : state) benchmark::DoNotOptimize(smallest_nonzero_eigenvalue(d));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SturmBisection)->RangeMultiplier(2)->Range(1024, 16384)->Complexity()->Unit(benchmark::kMillisecond);

}  // namespace
