#include <benchmark/benchmark.h>

#include <cmath>

#include "specgap/catalog.hpp"
#include "specgap/quadrature.hpp"
#include "specgap/radial_model.hpp"

using namespace specgap;

namespace {

void BM_IntegratePeaked(benchmark::State& state) {
    const auto g = [](double x) { return std::exp(-1e4 * (x - 0.3) * (x - 0.3)) + std::sqrt(x); };
    for (auto _ : state) benchmark::DoNotOptimize(integrate(g, 0.0, 1.0).value);
}
BENCHMARK(BM_IntegratePeaked);

void BM_MeasureConstruction(benchmark::State& state) {
    const FamilySpec spec{FamilyKind::generalized_cauchy, 3, 2.0, 2.5, WeightChoice::one_plus_r2};
    for (auto _ : state) benchmark::DoNotOptimize(make_family(spec).measure.log_r_max());
}
BENCHMARK(BM_MeasureConstruction)->Unit(benchmark::kMicrosecond);

void BM_SecondMoment(benchmark::State& state) {
    const auto f = make_family({FamilyKind::exponential_power, static_cast<int>(state.range(0)), 1.5, 0.0, WeightChoice::unit});
    for (auto _ : state) benchmark::DoNotOptimize(moment(f.measure, 2));
}
BENCHMARK(BM_SecondMoment)->Arg(3)->Arg(64)->Unit(benchmark::kMicrosecond);

}  // namespace
