#pragma once

namespace specgap {

/// log Gamma(x) for x > 0 (Stirling series after upward recurrence to x >= 15).
double log_gamma(double x);

/// Gamma(x) for x > 0; overflows to +inf past x ~ 171.6.
double gamma_function(double x);

/// log(Gamma(a) / Gamma(b)).
double log_gamma_ratio(double a, double b);

}  // namespace specgap
