#include "specgap/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "specgap/errors.hpp"

namespace specgap {

namespace {

constexpr double kShiftThreshold = 15.0;

// B_{2k} / (2k (2k-1)) for k = 1..8
constexpr double kStirling[] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
};

double stirling(double x) {
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = 0.0;
    double power = inv;
    for (double c : kStirling) {
        series += c * power;
        power *= inv2;
    }
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0))
        throw InvalidInput("log_gamma: argument must be positive");
    if (std::isinf(x))
        return std::numeric_limits<double>::infinity();
    if (x >= kShiftThreshold)
        return stirling(x);
    // Gamma(x) = Gamma(x + k) / (x (x+1) ... (x+k-1))
    double product = 1.0;
    double y = x;
    while (y < kShiftThreshold) {
        product *= y;
        y += 1.0;
    }
    return stirling(y) - std::log(product);
}

double gamma_function(double x) {
    return std::exp(log_gamma(x));
}

double log_gamma_ratio(double a, double b) {
    return log_gamma(a) - log_gamma(b);
}

}  // namespace specgap
