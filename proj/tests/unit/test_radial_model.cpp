#include <gtest/gtest.h>

#include <cmath>

#include "specgap/catalog.hpp"
#include "specgap/errors.hpp"
#include "specgap/radial_model.hpp"

using namespace specgap;

namespace {

RadialMeasure gaussian(int n) { return build_measure(n, exponential_power_potential(2.0)); }

}  // namespace

TEST(RadialMeasure, GaussianNormalization) {
    for (int n = 2; n <= 12; ++n) {
        const double ref = (0.5 * n - 1.0) * std::log(2.0) + std::lgamma(0.5 * n);
        EXPECT_NEAR(gaussian(n).log_z(), ref, 1e-12) << n;
    }
}

TEST(RadialMeasure, ExpPowerNormalization) {
    for (double alpha : {1.0, 1.5, 3.0, 4.0})
        for (int n : {2, 5, 16}) {
            const auto m = build_measure(n, exponential_power_potential(alpha));
            const double ref = (n / alpha - 1.0) * std::log(alpha) + std::lgamma(n / alpha);
            EXPECT_NEAR(m.log_z(), ref, 1e-11 * std::max(1.0, std::abs(ref))) << alpha << " " << n;
        }
}

TEST(RadialMeasure, CauchyAndBallNormalization) {
    for (int n : {2, 3, 6})
        for (double beta : {0.5 * n + 0.1, 0.5 * n + 1.0, 10.0}) {
            const auto m = build_measure(n, cauchy_potential(beta));
            const double ref = std::lgamma(0.5 * n) + std::lgamma(beta - 0.5 * n) - std::log(2.0) - std::lgamma(beta);
            EXPECT_NEAR(m.log_z(), ref, 1e-10) << n << " " << beta;
        }
    for (int n : {2, 5, 32}) EXPECT_NEAR(build_measure(n, ball_potential()).z(), 1.0 / n, 1e-13);
}

TEST(RadialMeasure, UnitMassOnCatalogGrid) {
    for (const auto& spec : catalog_grid()) {
        const auto fam = make_family(spec);
        EXPECT_NEAR(fam.measure.expectation([](double) { return 0.0; }), 1.0, 1e-9) << spec.label();
    }
}

TEST(RadialMeasure, SecondMoments) {
    EXPECT_NEAR(moment(gaussian(3), 2), 3.0, 1e-11);
    EXPECT_NEAR(moment(build_measure(2, ball_potential()), 2), 0.5, 1e-13);
    EXPECT_NEAR(moment(build_measure(3, cauchy_potential(4.0)), 2), 3.0 / (8.0 - 2.0 - 3.0), 1e-10);
    EXPECT_THROW(moment(build_measure(3, cauchy_potential(1.6)), 2), NonIntegrable);
}

TEST(RadialMeasure, CdfTailConsistencyAndQuantile) {
    for (const auto& m : {gaussian(3), build_measure(3, cauchy_potential(2.5)), build_measure(4, ball_potential()),
                          build_measure(8, exponential_power_potential(1.0))}) {
        const double lo = m.quantile(1e-6), hi = m.quantile(1.0 - 1e-6);
        double prev = -1.0;
        for (int i = 0; i < 100; ++i) {
            const double r = lo * std::pow(hi / lo, i / 99.0);
            const double c = m.cdf(r);
            EXPECT_LE(std::abs(m.tail_mass(r) - (1.0 - c)), 1e-8);
            EXPECT_GE(c, prev);
            prev = c;
            EXPECT_NEAR(m.quantile(c), r, 1e-8 * r);
        }
    }
}

TEST(RadialMeasure, TruncationRadius) {
    const auto m = gaussian(3);
    EXPECT_LT(m.tail_mass(m.r_max()), 1e-12);
    EXPECT_GT(m.tail_mass(0.9 * m.r_max()), 1e-12);
    EXPECT_EQ(build_measure(2, ball_potential()).r_max(), 1.0);
}

TEST(RadialMeasure, RejectsInconsistentPotential) {
    auto p = exponential_power_potential(2.0);
    p.dv = [](double r) { return 1.1 * r; };
    EXPECT_THROW(build_measure(3, p), DomainError);
    auto q = cauchy_potential(3.0);
    q.convex = true;
    EXPECT_THROW(build_measure(3, q), DomainError);
    EXPECT_THROW(build_measure(1, exponential_power_potential(2.0)), InvalidInput);
}

TEST(RadialModel, EffectivePotentialAndDrift) {
    const auto m = gaussian(4);
    const auto u = effective_potential(m);
    const auto w = make_weight(WeightChoice::one_plus_r2);
    const auto b = drift(m, w);
    const auto db = drift_derivative(m, w);
    for (double r : {0.1, 1.0, 7.0}) {
        EXPECT_NEAR(u.d2u(r), 1.0 + 3.0 / (r * r), 1e-12 * (1.0 + 3.0 / (r * r)));
        EXPECT_NEAR(b(r), 2 * r - (1 + r * r) * (r - 3.0 / r), 1e-12 * (1 + r * r * r + 3.0 / r));
        EXPECT_TRUE(derivative_consistent(b, db, r));
    }
}

TEST(RadialModel, WeightValidation) {
    const auto m = gaussian(3);
    EXPECT_NO_THROW(validate_weight(make_weight(WeightChoice::inv_one_plus_r2), m));
    auto w = make_weight(WeightChoice::one_plus_r2);
    w.ds2 = [](double r) { return 2.5 * r; };
    EXPECT_THROW(validate_weight(w, m), DomainError);
    auto v = make_weight(WeightChoice::one_plus_r2);
    v.s = [](double r) { return 1.0 + r; };
    EXPECT_THROW(validate_weight(v, m), DomainError);
}

TEST(RadialModel, BracketInvariant) {
    EXPECT_NO_THROW(make_bracket(1.0, 2.0, "a", "b"));
    EXPECT_THROW(make_bracket(2.0, 1.0, "a", "b"), Error);
    EXPECT_THROW(make_bracket(-1.0, 1.0, "a", "b"), Error);
}
