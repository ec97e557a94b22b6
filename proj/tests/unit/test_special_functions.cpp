#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "specgap/errors.hpp"
#include "specgap/special_functions.hpp"

using namespace specgap;

TEST(LogGamma, MatchesFactorials) {
    double log_fact = 0.0;  // log (k-1)!
    for (int k = 1; k <= 170; ++k) {
        EXPECT_LE(std::abs(log_gamma(k) - log_fact), 1e-13 * std::max(1.0, log_fact)) << "k=" << k;
        log_fact += std::log(static_cast<double>(k));
    }
}

TEST(LogGamma, MatchesHalfIntegers) {
    for (int k = 0; k <= 80; ++k) {
        double ref = 0.5 * std::log(std::numbers::pi) - k * std::log(4.0);
        for (int j = k + 1; j <= 2 * k; ++j) ref += std::log(static_cast<double>(j));
        EXPECT_LE(std::abs(log_gamma(k + 0.5) - ref), 1e-13 * std::max(1.0, std::abs(ref))) << "k=" << k;
    }
}

TEST(LogGamma, AgreesWithLibmOnAGrid) {
    for (double x = 0.01; x < 300.0; x *= 1.37)
        EXPECT_NEAR(log_gamma(x), std::lgamma(x), 1e-13 * std::max(1.0, std::abs(std::lgamma(x)))) << x;
}

TEST(LogGamma, RejectsNonPositive) {
    EXPECT_THROW(log_gamma(0.0), InvalidInput);
    EXPECT_THROW(log_gamma(-1.5), InvalidInput);
    EXPECT_THROW(log_gamma(std::nan("")), InvalidInput);
}

TEST(GammaFunction, SmallValuesAndRatio) {
    EXPECT_NEAR(gamma_function(5.0), 24.0, 1e-12);
    EXPECT_NEAR(gamma_function(0.5), std::sqrt(std::numbers::pi), 1e-14);
    EXPECT_NEAR(log_gamma_ratio(10.5, 10.0), std::lgamma(10.5) - std::lgamma(10.0), 1e-13);
    EXPECT_TRUE(std::isinf(gamma_function(200.0)));
}
