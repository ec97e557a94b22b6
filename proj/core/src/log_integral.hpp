#pragma once
#include <functional>
#include <limits>

namespace specgap::detail {

/// Integration window for log_integral. Infinite limits mean "walk outward and extrapolate".
struct LogIntegralWindow {
    double lo_limit = -std::numeric_limits<double>::infinity();
    double hi_limit = std::numeric_limits<double>::infinity();
    double scan_lo = -30.0;
    double scan_hi = 30.0;
};

struct LogIntegralResult {
    double log_value = 0.0;  // log of the integral
    double peak = 0.0;       // largest log-integrand value found
    double lo = 0.0;         // quadrature window in t
    double hi = 0.0;
    double tail_lo = 0.0;    // extrapolated tails, in units of exp(peak)
    double tail_hi = 0.0;
};

/// log of int exp(L(t)) dt over the window. Tails beyond the walking horizon are
/// extrapolated from the local log-linear slope; NonIntegrable if they do not decay.
LogIntegralResult log_integral(const std::function<double(double)>& L, const LogIntegralWindow& window,
                               double rel_tol);

inline constexpr double kLogHorizon = 300.0;

}  // namespace specgap::detail
