#pragma once
#include <functional>
#include <vector>

namespace specgap {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over the finite interval [a, b].
/// Stops when the summed error estimate is below max(abs_tol, rel_tol * |value|).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-12, double abs_tol = 0.0, int max_intervals = 4000);

/// Same, but the initial partition is given by the sorted breakpoints (at least two).
/// Useful when the integrand is sharply peaked somewhere inside a long interval.
QuadratureResult integrate_partitioned(const std::function<double(double)>& f,
                                       const std::vector<double>& breakpoints, double rel_tol = 1e-12,
                                       double abs_tol = 0.0, int max_intervals = 20000);

/// Single 15-point Kronrod rule on [a, b]; returns the value and |K15 - G7|.
QuadratureResult kronrod15(const std::function<double(double)>& f, double a, double b);

}  // namespace specgap
