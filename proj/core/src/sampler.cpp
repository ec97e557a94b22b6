#include "specgap/sampler.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "specgap/errors.hpp"
#include "specgap/parallel.hpp"

namespace specgap {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kRadiusStream = 1;
constexpr std::uint64_t kDirectionStream = 2;
constexpr std::size_t kBlock = 4096;
constexpr int kBatches = 16;

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL))) {}

std::uint64_t CounterRng::bits(std::uint64_t counter) const { return splitmix64(key_ + counter * kGolden); }

double CounterRng::uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

FieldFunction linear_field() {
    FieldFunction out;
    out.f = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    };
    out.grad = [](std::span<const double>, std::span<double> g) {
        for (double& v : g) v = 1.0;
    };
    out.label = "linear";
    return out;
}

FieldFunction radial_quadratic_field(double c) {
    FieldFunction out;
    out.f = [c](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s - c;
    };
    out.grad = [](std::span<const double> x, std::span<double> g) {
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * x[i];
    };
    out.label = "radial-quadratic";
    return out;
}

FieldFunction radial_field(const CandidateFunction& g) {
    auto norm = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
    };
    FieldFunction out;
    out.f = [g, norm](std::span<const double> x) { return g.f(norm(x)); };
    out.grad = [g, norm](std::span<const double> x, std::span<double> grad) {
        const double r = norm(x);
        const double scale = r > 0.0 ? g.df(r) / r : 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) grad[i] = scale * x[i];
    };
    out.label = "radial:" + g.label;
    return out;
}

std::vector<double> sample_radius(const RadialMeasure& measure, std::size_t count, std::uint64_t seed) {
    std::vector<double> r(count);
    const CounterRng rng(seed, kRadiusStream);
    const std::size_t blocks = (count + kBlock - 1) / kBlock;
    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t end = std::min(count, (b + 1) * kBlock);
        for (std::size_t i = b * kBlock; i < end; ++i) r[i] = measure.quantile(rng.uniform(i));
    });
    return r;
}

SampleBatch sample_mu(const RadialMeasure& measure, std::size_t count, std::uint64_t seed) {
    const int n = measure.dimension();
    if (n < 2) throw InvalidInput("sample_mu needs n >= 2");
    SampleBatch batch;
    batch.n = n;
    batch.count = count;
    batch.seed = seed;
    batch.radius = sample_radius(measure, count, seed);
    batch.points.assign(count * static_cast<std::size_t>(n), 0.0);

    const CounterRng rng(seed, kDirectionStream);
    const std::size_t pairs = static_cast<std::size_t>(n + 1) / 2;
    const std::size_t blocks = (count + kBlock - 1) / kBlock;
    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t end = std::min(count, (b + 1) * kBlock);
        std::vector<double> z(2 * pairs);
        for (std::size_t i = b * kBlock; i < end; ++i) {
            double norm2 = 0.0;
            for (std::size_t p = 0; p < pairs; ++p) {
                const std::uint64_t c = 2 * (i * pairs + p);
                const double rad = std::sqrt(-2.0 * std::log(rng.uniform(c)));
                const double ang = 2.0 * std::numbers::pi * rng.uniform(c + 1);
                z[2 * p] = rad * std::cos(ang);
                z[2 * p + 1] = rad * std::sin(ang);
            }
            for (int k = 0; k < n; ++k) norm2 += z[k] * z[k];
            const double scale = batch.radius[i] / std::sqrt(norm2);
            double* x = batch.points.data() + i * static_cast<std::size_t>(n);
            for (int k = 0; k < n; ++k) x[k] = z[k] * scale;
        }
    });
    return batch;
}

RayleighResult rayleigh_estimate(const SampleBatch& batch, const FieldFunction& f, const Weight& weight) {
    if (batch.count < static_cast<std::size_t>(kBatches))
        throw InvalidInput("rayleigh_estimate needs at least 16 samples");
    const std::size_t n = static_cast<std::size_t>(batch.n);

    // Per batch: sums of energy, f and f^2, accumulated in fixed order.
    std::array<std::array<double, 3>, kBatches> sums{};
    parallel_for(kBatches, [&](std::size_t b) {
        const std::size_t begin = batch.count * b / kBatches;
        const std::size_t end = batch.count * (b + 1) / kBatches;
        std::vector<double> grad(n);
        double e = 0.0, s1 = 0.0, s2 = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const auto x = batch.point(i);
            const double v = f.f(x);
            f.grad(x, grad);
            double g2 = 0.0;
            for (double g : grad) g2 += g * g;
            const double s2w = weight.is_unit() ? 1.0 : weight.s2(batch.radius[i]);
            e += s2w * g2;
            s1 += v;
            s2 += v * v;
        }
        const double m = static_cast<double>(end - begin);
        sums[b] = {e / m, s1 / m, s2 / m};
    });

    // Overall means weighted by batch size.
    double a = 0.0, c = 0.0, bb = 0.0;
    for (int b = 0; b < kBatches; ++b) {
        const double w = static_cast<double>(batch.count * (b + 1) / kBatches - batch.count * b / kBatches) /
                         static_cast<double>(batch.count);
        a += w * sums[b][0];
        c += w * sums[b][1];
        bb += w * sums[b][2];
    }
    const double var = bb - c * c;
    if (!(var >= 1e-12)) throw DegenerateFunction("empirical variance below 1e-12");

    // Delta method for A / (B - C^2) with the covariance of the batch means.
    const std::array<double, 3> mean{a, c, bb};
    const std::array<double, 3> grad{1.0 / var, 2.0 * a * c / (var * var), -a / (var * var)};
    double q = 0.0;
    for (int b = 0; b < kBatches; ++b) {
        double d = 0.0;
        for (int k = 0; k < 3; ++k) d += grad[k] * (sums[b][k] - mean[k]);
        q += d * d;
    }
    const double se = std::sqrt(q / (kBatches - 1) / kBatches);

    RayleighResult out;
    out.ratio = a / var;
    out.ci_half_width = 1.96 * se;
    out.batches = kBatches;
    out.energy = a;
    out.variance = var;
    return out;
}

}  // namespace specgap
