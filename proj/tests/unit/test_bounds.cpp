#include <gtest/gtest.h>

#include <cmath>

#include "oracle_values.hpp"
#include "specgap/bounds.hpp"
#include "specgap/catalog.hpp"
#include "specgap/errors.hpp"

using namespace specgap;

namespace {

RadialMeasure gaussian(int n) { return build_measure(n, exponential_power_potential(2.0)); }
RadialMeasure cauchy(int n, double beta) { return build_measure(n, cauchy_potential(beta)); }

// displayed potential of the (1+r^2)^(beta/2 - n/4) test function with sigma^2 = 1 + r^2
double cauchy_low_vf(int n, double beta, double r) {
    return ((2 * beta - n) * (2 * beta - n) * r * r + 2.0 * n * n + 4.0 * n - 4.0 * beta * n + 8.0 * beta) /
           (4.0 * (1.0 + r * r));
}

}  // namespace

TEST(MainTheorem, Bracket) {
    const auto b = main_theorem_bracket(3, 3.0);
    EXPECT_DOUBLE_EQ(b.lower, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(b.upper, 1.0);
    EXPECT_EQ(b.lower_source, source::second_moment_lower);
    EXPECT_THROW(main_theorem_bracket(3, 0.0), InvalidInput);
}

TEST(IntegratedBakryEmery, GaussianOracle) {
    for (const auto& [n, value] : oracle::kGaussianIntegratedBakryEmery) {
        const auto b = bj_lower(gaussian(n));
        EXPECT_EQ(b.status, BoundStatus::ok);
        EXPECT_NEAR(b.value, value, 1e-10 * value) << n;
        EXPECT_NEAR(bj_radial_lower(gaussian(n)).value, (n - 1.0) / n, 1e-12) << n;
    }
}

TEST(IntegratedBakryEmery, HypothesisFailsForNonConvexEffectivePotential) {
    EXPECT_THROW(bj_lower(cauchy(2, 10.0)), HypothesisFailed);
}

TEST(ChenPotential, GaussianQuadraticIsConstant) {
    const auto m = gaussian(5);
    const auto w = Weight::unit();
    const auto f = power_candidate(2.0);
    for (double r : {1e-12, 1e-9, 1e-3, 0.5, 3.0, 30.0}) EXPECT_NEAR(chen_potential(m, w, f, r), 2.0, 1e-12) << r;
}

TEST(ChenPotential, CauchyLowBetaClosedForm) {
    for (auto [n, beta] : {std::pair{3, 2.0}, {3, 3.5}, {2, 1.5}, {6, 4.5}}) {
        const auto m = cauchy(n, beta);
        const auto w = make_weight(WeightChoice::one_plus_r2);
        const auto f = one_plus_r2_power_candidate(0.5 * beta - 0.25 * n);
        for (double r : {1e-10, 1e-4, 0.3, 1.0, 4.0, 1e3, 1e8}) {
            const double ref = cauchy_low_vf(n, beta, r);
            EXPECT_NEAR(chen_potential(m, w, f, r), ref, 1e-11 * ref) << n << " " << beta << " " << r;
        }
    }
}

TEST(ChenLower, LowBetaInfimumIsSquare) {
    for (auto [n, beta] : {std::pair{3, 2.0}, {3, 2.5}, {2, 2.0}, {4, 3.5}, {6, 3.2}}) {
        const FamilySpec spec{FamilyKind::generalized_cauchy, n, 2.0, beta, WeightChoice::one_plus_r2};
        const auto fam = make_family(spec);
        const auto b = chen_lower(fam.measure, fam.weight, fam.candidate);
        const double ref = (beta - 0.5 * n) * (beta - 0.5 * n);
        EXPECT_EQ(b.status, BoundStatus::grid_infimum);
        EXPECT_NEAR(b.value, ref, 1e-6 * ref) << spec.label();
    }
}

TEST(ChenLower, EigenfunctionsGiveTheGap) {
    for (int n : {2, 4, 8}) {
        const auto fam = make_family({FamilyKind::gaussian, n, 2.0, 0.0, WeightChoice::unit});
        EXPECT_NEAR(chen_lower(fam.measure, fam.weight, fam.candidate).value, 2.0, 1e-10);
    }
    for (auto [n, beta] : {std::pair{3, 4.0}, {2, 5.0}, {4, 7.0}}) {
        const auto fam = make_family({FamilyKind::generalized_cauchy, n, 2.0, beta, WeightChoice::one_plus_r2});
        const double ref = 4.0 * (beta - 0.5 * n - 1.0);
        EXPECT_NEAR(chen_lower(fam.measure, fam.weight, fam.candidate).value, ref, 1e-9 * ref);
    }
}

TEST(ChenLower, RejectsDecreasingCandidate) {
    EXPECT_THROW(chen_lower(gaussian(3), Weight::unit(), power_candidate(-1.0)), HypothesisFailed);
}

TEST(ChenLower, BallDesignatedCandidate) {
    for (int n : {2, 4, 8}) {
        const auto fam = make_family({FamilyKind::uniform_ball, n, 2.0, 0.0, WeightChoice::unit});
        const auto b = chen_lower(fam.measure, fam.weight, fam.candidate);
        EXPECT_NEAR(b.value, 0.25 * (n * n - 1.0), 1e-9 * n * n) << n;
    }
}

TEST(WeightedBakryEmery, GaussianOnePlusR2Oracle) {
    const auto w = make_weight(WeightChoice::one_plus_r2);
    for (const auto& [r, value] : oracle::kWeightedPotentialN3)
        EXPECT_NEAR(weighted_bakry_emery_potential(gaussian(3), w, r), value, 1e-12 * value);
    for (const auto& [n, value] : oracle::kGaussianWeightedBakryEmery)
        EXPECT_NEAR(bj_weighted_lower(gaussian(n), w).value, value, 1e-9 * value) << n;
}

TEST(WeightedBakryEmery, UnitWeightReducesToIntegratedBound) {
    EXPECT_NEAR(bj_weighted_lower(gaussian(4), Weight::unit()).value, bj_lower(gaussian(4)).value, 1e-12);
}

TEST(Comparison, MinTerms) {
    const auto s = spectral_comparison(2.0, 3, 3.0);
    EXPECT_DOUBLE_EQ(s.lower, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.upper, 1.0);
    const auto t = spectral_comparison(0.5, 3, 3.0);
    EXPECT_DOUBLE_EQ(t.lower, 0.5);
    EXPECT_DOUBLE_EQ(t.upper, 0.5);
    const auto w = weighted_comparison(10.0, 4, 0.5, 2.0, 1.0);
    EXPECT_DOUBLE_EQ(w.lower, 6.0);
    EXPECT_DOUBLE_EQ(w.upper, 8.0);
    EXPECT_THROW(weighted_comparison(-1.0, 4, 0.5, 2.0, 4.0), InvalidInput);
}

TEST(Rayleigh, GaussianLinearRadialFunction) {
    for (int n : {2, 3, 7}) {
        const double mean = std::sqrt(2.0) * std::exp(std::lgamma(0.5 * (n + 1)) - std::lgamma(0.5 * n));
        const double ref = 1.0 / (n - mean * mean);
        EXPECT_NEAR(rayleigh_upper(gaussian(n), Weight::unit(), linear_candidate()), ref, 1e-10 * ref) << n;
    }
}

TEST(Rayleigh, CauchyPowerOfOnePlusR2) {
    // f = (1+r^2)^e, sigma^2 = 1 + r^2: closed form through Beta integrals
    for (auto [n, beta, e] : {std::tuple{3, 4.0, 0.5}, {3, 3.0, 0.2}, {2, 2.5, 0.3}}) {
        auto lb = [](double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); };
        const double h = 0.5 * n;
        // E[(1+r^2)^k] = B(h, beta - h - k) / B(h, beta - h)
        auto mom = [&](double k) { return std::exp(lb(h, beta - h - k) - lb(h, beta - h)); };
        // energy: 4 e^2 E[r^2 (1+r^2)^(2e-1)] = 4 e^2 (E[(1+r^2)^(2e)] - E[(1+r^2)^(2e-1)])
        const double energy = 4.0 * e * e * (mom(2 * e) - mom(2 * e - 1));
        const double var = mom(2 * e) - mom(e) * mom(e);
        const auto fam = make_family({FamilyKind::generalized_cauchy, n, 2.0, beta, WeightChoice::one_plus_r2});
        EXPECT_NEAR(rayleigh_upper(fam.measure, fam.weight, one_plus_r2_power_candidate(e)), energy / var,
                    1e-9 * energy / var);
    }
}

TEST(Rayleigh, DegenerateAndNonIntegrable) {
    CandidateFunction c;
    c.f = [](double) { return 1.0; };
    c.df = [](double) { return 0.0; };
    EXPECT_THROW(rayleigh_upper(gaussian(3), Weight::unit(), c), DegenerateFunction);
    const auto fam = make_family({FamilyKind::generalized_cauchy, 3, 2.0, 1.8, WeightChoice::one_plus_r2});
    EXPECT_THROW(rayleigh_upper(fam.measure, fam.weight, power_candidate(2.0)), NonIntegrable);
}

TEST(ExpPower, ExplicitBrackets) {
    const auto b = exp_power_explicit(3, 1.0);
    EXPECT_NEAR(b.exact.lower, 1.0 / 6.0, 1e-14);
    EXPECT_NEAR(b.exact.upper, 0.25, 1e-14);
    for (double alpha : {1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0})
        for (int n = 2; n <= 64; n *= 2) {
            const auto e = exp_power_explicit(n, alpha);
            EXPECT_LE(e.simplified.lower, e.exact.lower * (1 + 1e-12));
            EXPECT_LE(e.exact.upper, e.simplified.upper * (1 + 1e-12));
            EXPECT_NEAR(e.m2, moment(build_measure(n, exponential_power_potential(alpha)), 2), 1e-10 * e.m2);
        }
    EXPECT_THROW(exp_power_explicit(3, 0.5), InvalidInput);
}

TEST(GammaRatio, InequalitiesOnGrid) {
    for (double a : {0.25, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0})
        for (int k = 0; k <= 8; ++k) {
            const double b = 0.25 * k;
            for (auto br : {GammaBranch::first, GammaBranch::second}) {
                if ((br == GammaBranch::first && b > 1.0) || (br == GammaBranch::second && b < 1.0)) {
                    EXPECT_THROW(gamma_ratio_bounds(a, b, br), InvalidInput);
                    continue;
                }
                const auto g = gamma_ratio_bounds(a, b, br);
                EXPECT_GE(g.value - g.lower, -1e-12) << a << " " << b;
                EXPECT_GE(g.upper - g.value, -1e-12) << a << " " << b;
            }
        }
    EXPECT_EQ(gamma_ratio_bounds(2.0, 1.5).branch, GammaBranch::second);
}
