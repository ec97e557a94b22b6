#include "log_integral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "specgap/errors.hpp"
#include "specgap/quadrature.hpp"

namespace specgap::detail {

namespace {

constexpr double kDrop = 40.0;
constexpr double kMinDecay = 1e-3;
constexpr double kPieceWidth = 0.5;
constexpr int kScanPoints = 256;

double eval(const std::function<double(double)>& L, double t) {
    const double v = L(t);
    if (std::isnan(v))
        throw DomainError("log-integrand is NaN at t = " + std::to_string(t));
    if (v == std::numeric_limits<double>::infinity())
        throw NonIntegrable("integrand is infinite at t = " + std::to_string(t));
    return v;
}

}  // namespace

LogIntegralResult log_integral(const std::function<double(double)>& L, const LogIntegralWindow& window,
                               double rel_tol) {
    const bool fixed_lo = std::isfinite(window.lo_limit);
    const bool fixed_hi = std::isfinite(window.hi_limit);
    const double lo_bound = fixed_lo ? window.lo_limit : -kLogHorizon;
    const double hi_bound = fixed_hi ? window.hi_limit : kLogHorizon;
    double scan_lo = std::max(window.scan_lo, lo_bound);
    double scan_hi = std::min(window.scan_hi, hi_bound);
    if (!(scan_hi > scan_lo)) {
        scan_lo = lo_bound;
        scan_hi = std::max(lo_bound, std::min(hi_bound, lo_bound + 1.0));
    }

    LogIntegralResult res;
    double peak = -std::numeric_limits<double>::infinity();
    double t_peak = scan_lo;
    for (int i = 0; i < kScanPoints; ++i) {
        const double t = scan_lo + (scan_hi - scan_lo) * i / (kScanPoints - 1);
        const double v = eval(L, t);
        if (v > peak) {
            peak = v;
            t_peak = t;
        }
    }
    if (peak == -std::numeric_limits<double>::infinity()) {
        res.log_value = peak;
        res.peak = peak;
        res.lo = scan_lo;
        res.hi = scan_hi;
        return res;
    }

    // walk right
    double hi = std::max(scan_hi, t_peak);
    if (fixed_hi) {
        hi = hi_bound;
    } else {
        double step = 0.25;
        while (hi < hi_bound) {
            const double v = eval(L, hi);
            peak = std::max(peak, v);
            if (v < peak - kDrop)
                break;
            hi = std::min(hi + step, hi_bound);
            step = std::min(step * 1.5, 4.0);
        }
    }
    // walk left
    double lo = std::min(scan_lo, t_peak);
    if (fixed_lo) {
        lo = lo_bound;
    } else {
        double step = 0.25;
        while (lo > lo_bound) {
            const double v = eval(L, lo);
            peak = std::max(peak, v);
            if (v < peak - kDrop)
                break;
            lo = std::max(lo - step, lo_bound);
            step = std::min(step * 1.5, 4.0);
        }
    }

    if (!fixed_hi && hi >= hi_bound) {
        const double v = eval(L, hi);
        const double slope = (v - eval(L, hi - 0.5)) / 0.5;
        if (!(slope < -kMinDecay))
            throw NonIntegrable("integrand does not decay as r -> infinity");
        res.tail_hi = std::exp(v - peak) / -slope;
    }
    if (!fixed_lo && lo <= lo_bound) {
        const double v = eval(L, lo);
        const double slope = (eval(L, lo + 0.5) - v) / 0.5;
        if (v > -std::numeric_limits<double>::infinity()) {
            if (!(slope > kMinDecay))
                throw NonIntegrable("integrand does not decay as r -> 0");
            res.tail_lo = std::exp(v - peak) / slope;
        }
    }

    std::vector<double> breaks;
    const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / kPieceWidth)));
    breaks.reserve(static_cast<std::size_t>(pieces) + 1);
    for (int i = 0; i <= pieces; ++i)
        breaks.push_back(lo + (hi - lo) * i / pieces);
    breaks.back() = hi;
    const double shift = peak;
    auto integrand = [&](double t) { return std::exp(eval(L, t) - shift); };
    const auto q = integrate_partitioned(integrand, breaks, rel_tol, 0.0, 50000);
    const double total = q.value + res.tail_lo + res.tail_hi;
    res.log_value = total > 0 ? shift + std::log(total) : -std::numeric_limits<double>::infinity();
    res.peak = peak;
    res.lo = lo;
    res.hi = hi;
    return res;
}

}  // namespace specgap::detail
