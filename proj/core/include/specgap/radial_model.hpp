#pragma once
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace specgap {

using RealFunction = std::function<double(double)>;

/// Radial potential V on (0, R) with its first two derivatives.
struct RadialPotential {
    RealFunction v;
    RealFunction dv;
    RealFunction d2v;
    /// Optional t -> V(e^t); lets heavy tails be evaluated at radii that overflow a double.
    RealFunction v_at_log;
    double domain_end = std::numeric_limits<double>::infinity();
    bool convex = false;

    double value_at_log(double t) const;
    bool bounded() const;
};

/// Diffusion coefficient sigma^2 with sigma and the first two derivatives of both.
struct Weight {
    RealFunction s2;
    RealFunction ds2;
    RealFunction d2s2;
    RealFunction s;
    RealFunction ds;
    RealFunction d2s;
    /// Optional t -> log sigma^2(e^t).
    RealFunction log_s2_at_log;

    double log_s2(double t) const;
    bool is_unit() const { return unit_; }

    static Weight unit();

private:
    bool unit_ = false;
};

/// Lower/upper pair with the name of the argument that produced each side.
struct BoundBracket {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    std::string lower_source;
    std::string upper_source;
};

/// Throws specgap::Error unless lower <= upper and lower >= 0.
BoundBracket make_bracket(double lower, double upper, std::string lower_source,
                          std::string upper_source);

/// Integrand given in log form: t -> log g(e^t). Returning -inf means g = 0.
using LogIntegrand = std::function<double(double)>;

/// Probability measure on (0, R) with density proportional to r^(n-1) exp(-V(r)).
/// Immutable once built.
class RadialMeasure {
public:
    int dimension() const { return n_; }
    const RadialPotential& potential() const { return potential_; }
    double domain_end() const { return potential_.domain_end; }
    double tail_tol() const { return tail_tol_; }

    /// Normalization constant (may overflow; log_z() never does).
    double z() const;
    double log_z() const { return log_z_; }

    /// Truncation radius: the tabulated mass beyond it is below tail_tol.
    double r_max() const;
    double log_r_max() const { return table_t_.back(); }
    /// Log radius where the tabulated CDF starts (mass below it is negligible).
    double log_lower_cut() const { return table_t_.front(); }

    /// log of dnu/dr at r.
    double log_density(double r) const;
    /// log of dnu/dt at r = e^t.
    double log_density_at_log(double t) const;

    double cdf(double r) const;
    double tail_mass(double r) const;
    /// Inverse CDF for u in (0, 1).
    double quantile(double u) const;

    /// int g dnu for g >= 0 given as log g(e^t).
    double expectation(const LogIntegrand& log_g, double rel_tol = 1e-12) const;
    /// Same, returning the log of the integral.
    double log_expectation(const LogIntegrand& log_g, double rel_tol = 1e-12) const;
    /// int g dnu for g of either sign, g given as a function of r.
    double expectation_signed(const RealFunction& g, double rel_tol = 1e-12) const;

    /// Geometric radii spanning the bulk of the measure, used for hypothesis and derivative checks.
    std::vector<double> diagnostic_radii(int count = 64) const;

    /// Number of nodes of the CDF table.
    std::size_t table_size() const { return table_t_.size(); }

private:
    friend RadialMeasure build_measure(int n, RadialPotential potential, double tail_tol);
    RadialMeasure() = default;

    double table_cdf_at(double t) const;
    double exact_cdf_at(double t) const;

    int n_ = 0;
    RadialPotential potential_;
    double tail_tol_ = 0.0;
    double log_z_ = 0.0;
    double scan_lo_ = 0.0;
    double scan_hi_ = 0.0;
    std::vector<double> table_t_;
    std::vector<double> table_f_;
    std::vector<double> table_slope_;
};

RadialMeasure build_measure(int n, RadialPotential potential, double tail_tol = 1e-12);

double moment(const RadialMeasure& measure, int k);

enum class WeightedMomentKind { r2_over_s2, s2 };

double weighted_moment(const RadialMeasure& measure, const Weight& weight, WeightedMomentKind kind);

/// U = V - (n-1) log r and its first two derivatives.
struct EffectivePotential {
    RealFunction u;
    RealFunction du;
    RealFunction d2u;
};

EffectivePotential effective_potential(const RadialMeasure& measure);

/// b = (sigma^2)' - sigma^2 (V' - (n-1)/r).
RealFunction drift(const RadialMeasure& measure, const Weight& weight);
/// b'.
RealFunction drift_derivative(const RadialMeasure& measure, const Weight& weight);

double tail_mass(const RadialMeasure& measure, double r);

/// Checks ellipticity, sigma^2 = s2 and the supplied derivatives on the measure's diagnostic grid.
/// Throws DomainError on failure.
void validate_weight(const Weight& weight, const RadialMeasure& measure);

/// Central-difference check of an analytic derivative at r. Returns true if consistent.
bool derivative_consistent(const RealFunction& f, const RealFunction& df, double r);

}  // namespace specgap
