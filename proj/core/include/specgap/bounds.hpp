#pragma once
#include <limits>
#include <string>
#include <string_view>

#include "specgap/eigensolver.hpp"
#include "specgap/radial_model.hpp"

namespace specgap {

/// Test function f(r) with derivatives up to third order.
struct CandidateFunction {
    RealFunction f;
    RealFunction df;
    RealFunction d2f;
    RealFunction d3f;
    /// Optional r f'' - f'; supplied analytically it removes the cancellation of V_f near r = 0.
    RealFunction defect;
    bool monotone = true;  ///< claim f' > 0 on the interior
    std::string label;
};

/// Provenance labels attached to every bound.
namespace source {
inline constexpr const char* second_moment_lower = "second-moment-lower";
inline constexpr const char* linear_test_function = "linear-test-function";
inline constexpr const char* second_moment_radial = "second-moment-radial";
inline constexpr const char* integrated_bakry_emery = "integrated-bakry-emery";
inline constexpr const char* weighted_bakry_emery = "weighted-bakry-emery";
inline constexpr const char* chen_variational = "chen-variational";
inline constexpr const char* radial_spherical_min = "radial-spherical-min";
inline constexpr const char* weighted_radial_spherical_min = "weighted-radial-spherical-min";
inline constexpr const char* rayleigh_quotient = "rayleigh-quotient";
inline constexpr const char* gamma_log_convexity = "gamma-log-convexity";
}  // namespace source

enum class BoundStatus {
    ok,
    non_informative,  ///< hypothesis of the bound gives nothing (value reported as 0)
    grid_infimum,     ///< infimum taken over a finite grid
};

std::string_view to_string(BoundStatus status);

struct BoundValue {
    double value = 0.0;
    BoundStatus status = BoundStatus::ok;
    std::string source;
    double argmin = std::numeric_limits<double>::quiet_NaN();
};

/// [(n-1)/m2, n/m2] for a log-concave radial measure with second moment m2.
BoundBracket main_theorem_bracket(int n, double m2);

/// 1 / int (1/U'') dnu.
BoundValue bj_lower(const RadialMeasure& measure);

/// (n-1) / int r^2 dnu.
BoundValue bj_radial_lower(const RadialMeasure& measure);

/// V_f(r) = -(L f)'(r) / f'(r) for L g = sigma^2 g'' + b g'.
double chen_potential(const RadialMeasure& measure, const Weight& weight, const CandidateFunction& f,
                      double r);

/// Infimum of V_f over a geometric grid of 10 * grid.n_cells points spanning the measure,
/// polished by golden-section search around the grid minimizer.
BoundValue chen_lower(const RadialMeasure& measure, const Weight& weight, const CandidateFunction& f,
                      const GridSpec& grid = {});

/// (sigma^2 sigma'' + b sigma') / sigma - b'.
double weighted_bakry_emery_potential(const RadialMeasure& measure, const Weight& weight, double r);

/// 1 / int (1 / V_sigma) dnu with V_sigma the weighted Bakry-Emery potential.
BoundValue bj_weighted_lower(const RadialMeasure& measure, const Weight& weight);

/// [min(lambda_nu, (n-1)/m2), min(lambda_nu, n/m2)].
BoundBracket spectral_comparison(double lambda_nu, int n, double m2);

/// [min(lambda, (n-1)/m_r2_over_s2), min(lambda, n m_s2 / m2)].
BoundBracket weighted_comparison(double lambda_nu_sigma, int n, double m_r2_over_s2, double m_s2,
                                 double m2);

/// int sigma^2 f'^2 dnu / Var_nu(f).
double rayleigh_upper(const RadialMeasure& measure, const Weight& weight, const CandidateFunction& f);

struct ExpPowerBrackets {
    double m2 = 0.0;
    BoundBracket exact;       ///< Gamma-ratio form of [(n-1)/m2, n/m2]
    BoundBracket simplified;  ///< [(n-1)/(n+1), (n+2)/n] * n^(1-2/alpha)
};

/// Brackets for V = r^alpha / alpha; throws Error if the simplified bracket fails to contain the exact one.
ExpPowerBrackets exp_power_explicit(int n, double alpha);

/// Second moment alpha^(2/alpha) Gamma((n+2)/alpha) / Gamma(n/alpha) of the exponential power law.
double exp_power_second_moment(int n, double alpha);

enum class GammaBranch {
    automatic,  ///< b <= 1 uses the first form, b > 1 the second
    first,      ///< b in [0, 1]: 1 <= R <= ((a+b)/a)^(1-b)
    second,     ///< b in [1, 2]: a/(a+b-1) <= R <= ((a+b-1)/a)^(2-b)
};

struct GammaRatioBounds {
    double lower = 0.0;
    double value = 0.0;  ///< R = Gamma(a) a^b / Gamma(a+b)
    double upper = 0.0;
    GammaBranch branch = GammaBranch::automatic;
};

GammaRatioBounds gamma_ratio_bounds(double a, double b, GammaBranch branch = GammaBranch::automatic);

}  // namespace specgap
