#pragma once
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "specgap/bounds.hpp"
#include "specgap/radial_model.hpp"

namespace specgap {

/// Counter-based generator: the k-th draw of a stream is splitmix64(key + k * golden), with the key
/// derived from (seed, stream id). Any draw can be computed independently of the others.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t bits(std::uint64_t counter) const;
    /// Uniform on the open interval (0, 1).
    double uniform(std::uint64_t counter) const;

private:
    std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// count points of mu in R^n, row-major.
struct SampleBatch {
    int n = 0;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::vector<double> radius;
    std::vector<double> points;

    std::span<const double> point(std::size_t i) const {
        return {points.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
    }
};

struct RayleighResult {
    double ratio = 0.0;
    double ci_half_width = 0.0;  ///< 95% normal approximation, delta method over batch means
    int batches = 16;
    double energy = 0.0;    ///< mean of sigma^2 |grad f|^2
    double variance = 0.0;  ///< empirical Var f
};

/// Test function on R^n with its gradient.
struct FieldFunction {
    std::function<double(std::span<const double>)> f;
    std::function<void(std::span<const double>, std::span<double>)> grad;
    std::string label;
};

/// x -> sum of coordinates.
FieldFunction linear_field();
/// x -> |x|^2 - c.
FieldFunction radial_quadratic_field(double c = 0.0);
/// x -> g(|x|).
FieldFunction radial_field(const CandidateFunction& g);

/// Inverse-CDF draws of the radial law.
std::vector<double> sample_radius(const RadialMeasure& measure, std::size_t count, std::uint64_t seed);

/// Radius times an independent uniform direction (normalized Box-Muller normals).
SampleBatch sample_mu(const RadialMeasure& measure, std::size_t count, std::uint64_t seed);

/// Throws DegenerateFunction if the empirical variance is below 1e-12, InvalidInput if count < 16.
RayleighResult rayleigh_estimate(const SampleBatch& batch, const FieldFunction& f, const Weight& weight);

}  // namespace specgap
