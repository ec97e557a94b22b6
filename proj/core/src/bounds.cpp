#include "specgap/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "specgap/errors.hpp"
#include "specgap/special_functions.hpp"

namespace specgap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string at(double r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " at r = %.6g", r);
    return buf;
}

BoundValue non_informative(const char* src) {
    BoundValue b;
    b.value = 0.0;
    b.status = BoundStatus::non_informative;
    b.source = src;
    return b;
}

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || std::isnan(x))
        throw InvalidInput(std::string(what) + " must be positive");
}

}  // namespace

std::string_view to_string(BoundStatus status) {
    switch (status) {
    case BoundStatus::ok:
        return "ok";
    case BoundStatus::non_informative:
        return "non_informative";
    case BoundStatus::grid_infimum:
        return "grid_infimum";
    }
    return "ok";
}

BoundBracket main_theorem_bracket(int n, double m2) {
    if (n < 2)
        throw InvalidInput("dimension must be at least 2");
    require_positive(m2, "second moment");
    return make_bracket((n - 1) / m2, n / m2, source::second_moment_lower, source::linear_test_function);
}

BoundValue bj_lower(const RadialMeasure& measure) {
    const auto u = effective_potential(measure);
    for (double r : measure.diagnostic_radii()) {
        const double curv = u.d2u(r);
        if (!(curv > 0.0))
            throw HypothesisFailed("U'' is not positive" + at(r));
    }
    double integral;
    try {
        integral = measure.expectation([&](double t) {
            const double r = std::exp(t);
            const double curv = u.d2u(r);
            if (!(curv > 0.0))
                throw HypothesisFailed("U'' is not positive" + at(r));
            return -std::log(curv);
        });
    } catch (const NonIntegrable&) {
        return non_informative(source::integrated_bakry_emery);
    }
    if (!(integral > 0.0) || !std::isfinite(integral))
        return non_informative(source::integrated_bakry_emery);
    return {1.0 / integral, BoundStatus::ok, source::integrated_bakry_emery};
}

BoundValue bj_radial_lower(const RadialMeasure& measure) {
    const double m2 = moment(measure, 2);
    return {(measure.dimension() - 1) / m2, BoundStatus::ok, source::second_moment_radial};
}

constexpr double kChenLogCap = 100.0;

double chen_potential(const RadialMeasure& measure, const Weight& weight, const CandidateFunction& f,
                      double r) {
    const int n = measure.dimension();
    const auto& p = measure.potential();
    const double s2 = weight.s2(r);
    const double ds2 = weight.ds2(r);
    const double d2s2 = weight.d2s2(r);
    const double dv = p.dv(r);
    const double d2v = p.d2v(r);
    const double f1 = f.df(r);
    const double f2 = f.d2f(r);
    const double f3 = f.d3f(r);
    const double defect = f.defect ? f.defect(r) : r * f2 - f1;
    // (L f)' = (sigma^2)' f'' + sigma^2 f''' + b' f' + b f'', regrouped so that the (n-1)/r and
    // (n-1)/r^2 parts of b and b' enter only through r f'' - f'.
    const double regular = s2 * f3 + 2.0 * ds2 * f2 + d2s2 * f1 - ds2 * dv * f1 - s2 * d2v * f1 - s2 * dv * f2;
    const double singular = (n - 1) * (ds2 * f1 / r + s2 * defect / (r * r));
    return -(regular + singular) / f1;
}

BoundValue chen_lower(const RadialMeasure& measure, const Weight& weight, const CandidateFunction& f,
                      const GridSpec& grid) {
    grid.validate();
    if (!f.df || !f.d2f || !f.d3f)
        throw InvalidInput("candidate function must supply three derivatives");
    validate_weight(weight, measure);
    const double t_lo = measure.log_lower_cut();
    // Beyond log r = 100 the cubic terms of V_f overflow; heavy tails are cut there.
    const double t_hi = measure.potential().bounded() ? std::log(measure.domain_end())
                                                      : std::min(measure.log_r_max(), kChenLogCap);
    const int points = 10 * grid.n_cells;
    auto eval = [&](double t) {
        const double r = std::exp(t);
        const double d = f.df(r);
        if (std::isnan(d))
            throw DomainError("candidate derivative is NaN" + at(r));
        if (!(d > 0.0))
            throw HypothesisFailed("candidate function is not increasing" + at(r));
        const double v = chen_potential(measure, weight, f, r);
        if (std::isnan(v))
            throw DomainError("V_f is NaN" + at(r));
        return v;
    };
    double best = kInf;
    int best_i = -1;
    std::vector<double> ts(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        double t = t_lo + (t_hi - t_lo) * i / (points - 1);
        if (i == points - 1)
            t = t_hi;
        ts[static_cast<std::size_t>(i)] = t;
        const double v = eval(t);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    if (best_i < 0)
        throw DomainError("V_f is not finite anywhere on the grid");
    double best_t = ts[static_cast<std::size_t>(best_i)];
    if (best_i > 0 && best_i < points - 1) {
        // golden-section polish on the neighbouring grid cells
        double a = ts[static_cast<std::size_t>(best_i - 1)];
        double b = ts[static_cast<std::size_t>(best_i + 1)];
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - g * (b - a);
        double x2 = a + g * (b - a);
        double f1 = eval(x1);
        double f2 = eval(x2);
        for (int iter = 0; iter < 80 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++iter) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = eval(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = eval(x2);
            }
        }
        const double tm = f1 < f2 ? x1 : x2;
        const double vm = std::min(f1, f2);
        if (vm < best) {
            best = vm;
            best_t = tm;
        }
    }
    BoundValue out;
    out.source = source::chen_variational;
    out.argmin = std::exp(best_t);
    if (!(best > 0.0)) {
        out.value = 0.0;
        out.status = BoundStatus::non_informative;
        return out;
    }
    out.value = best;
    out.status = BoundStatus::grid_infimum;
    return out;
}

double weighted_bakry_emery_potential(const RadialMeasure& measure, const Weight& weight, double r) {
    const int n = measure.dimension();
    const auto& p = measure.potential();
    const double s2 = weight.s2(r);
    const double ds2 = weight.ds2(r);
    const double d2s2 = weight.d2s2(r);
    const double s = weight.s(r);
    const double ds = weight.ds(r);
    const double d2s = weight.d2s(r);
    const double dv = p.dv(r);
    const double d2v = p.d2v(r);
    const double b = ds2 - s2 * (dv - (n - 1) / r);
    const double db = d2s2 - ds2 * (dv - (n - 1) / r) - s2 * (d2v + (n - 1) / (r * r));
    return (s2 * d2s + b * ds) / s - db;
}

BoundValue bj_weighted_lower(const RadialMeasure& measure, const Weight& weight) {
    validate_weight(weight, measure);
    for (double r : measure.diagnostic_radii()) {
        const double v = weighted_bakry_emery_potential(measure, weight, r);
        if (!(v > 0.0))
            throw HypothesisFailed("weighted Bakry-Emery potential is not positive" + at(r));
    }
    double integral;
    try {
        integral = measure.expectation([&](double t) {
            const double r = std::exp(t);
            const double v = weighted_bakry_emery_potential(measure, weight, r);
            if (std::isnan(v))
                throw DomainError("weighted Bakry-Emery potential is NaN" + at(r));
            if (!(v > 0.0))
                throw HypothesisFailed("weighted Bakry-Emery potential is not positive" + at(r));
            return -std::log(v);
        });
    } catch (const NonIntegrable&) {
        return non_informative(source::weighted_bakry_emery);
    }
    if (!(integral > 0.0) || !std::isfinite(integral))
        return non_informative(source::weighted_bakry_emery);
    return {1.0 / integral, BoundStatus::ok, source::weighted_bakry_emery};
}

BoundBracket spectral_comparison(double lambda_nu, int n, double m2) {
    if (!(lambda_nu >= 0.0))
        throw InvalidInput("radial gap must be nonnegative");
    if (n < 2)
        throw InvalidInput("dimension must be at least 2");
    require_positive(m2, "second moment");
    return make_bracket(std::min(lambda_nu, (n - 1) / m2), std::min(lambda_nu, n / m2),
                        source::radial_spherical_min, source::radial_spherical_min);
}

BoundBracket weighted_comparison(double lambda_nu_sigma, int n, double m_r2_over_s2, double m_s2,
                                 double m2) {
    if (!(lambda_nu_sigma >= 0.0))
        throw InvalidInput("radial gap must be nonnegative");
    if (n < 2)
        throw InvalidInput("dimension must be at least 2");
    require_positive(m_r2_over_s2, "moment of r^2/sigma^2");
    require_positive(m_s2, "moment of sigma^2");
    require_positive(m2, "second moment");
    return make_bracket(std::min(lambda_nu_sigma, (n - 1) / m_r2_over_s2),
                        std::min(lambda_nu_sigma, n * m_s2 / m2), source::weighted_radial_spherical_min,
                        source::weighted_radial_spherical_min);
}

double rayleigh_upper(const RadialMeasure& measure, const Weight& weight, const CandidateFunction& f) {
    if (!f.f || !f.df)
        throw InvalidInput("candidate function must supply f and f'");
    const double energy = measure.expectation([&](double t) {
        const double d = f.df(std::exp(t));
        if (std::isnan(d))
            throw DomainError("candidate derivative is NaN" + at(std::exp(t)));
        return d == 0.0 ? -kInf : weight.log_s2(t) + 2.0 * std::log(std::abs(d));
    });
    const double mean = measure.expectation_signed(f.f);
    const double variance = measure.expectation([&](double t) {
        const double d = f.f(std::exp(t)) - mean;
        if (std::isnan(d))
            throw DomainError("candidate function is NaN" + at(std::exp(t)));
        return d == 0.0 ? -kInf : 2.0 * std::log(std::abs(d));
    });
    if (!(variance >= 1e-14))
        throw DegenerateFunction("candidate function has (numerically) zero variance");
    return energy / variance;
}

double exp_power_second_moment(int n, double alpha) {
    if (n < 2)
        throw InvalidInput("dimension must be at least 2");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw InvalidInput("alpha must be positive and finite");
    return std::exp((2.0 / alpha) * std::log(alpha) + log_gamma((n + 2) / alpha) - log_gamma(n / alpha));
}

ExpPowerBrackets exp_power_explicit(int n, double alpha) {
    if (n < 2)
        throw InvalidInput("dimension must be at least 2");
    if (!(alpha >= 1.0) || !std::isfinite(alpha))
        throw InvalidInput("alpha must be finite and at least 1");
    ExpPowerBrackets out;
    out.m2 = exp_power_second_moment(n, alpha);
    out.exact = main_theorem_bracket(n, out.m2);
    const double scale = std::pow(static_cast<double>(n), 1.0 - 2.0 / alpha);
    out.simplified = make_bracket((n - 1.0) / (n + 1.0) * scale, (n + 2.0) / n * scale,
                                  source::gamma_log_convexity, source::gamma_log_convexity);
    const double slack = 1e-12;
    if (out.simplified.lower > out.exact.lower * (1 + slack) ||
        out.exact.upper > out.simplified.upper * (1 + slack))
        throw Error("simplified exponential-power bracket does not contain the exact bracket");
    return out;
}

GammaRatioBounds gamma_ratio_bounds(double a, double b, GammaBranch branch) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw InvalidInput("a must be positive and finite");
    if (!(b >= 0.0 && b <= 2.0))
        throw InvalidInput("b must lie in [0, 2]");
    if (branch == GammaBranch::automatic)
        branch = b <= 1.0 ? GammaBranch::first : GammaBranch::second;
    if (branch == GammaBranch::first && b > 1.0)
        throw InvalidInput("first Gamma inequality needs b in [0, 1]");
    if (branch == GammaBranch::second && b < 1.0)
        throw InvalidInput("second Gamma inequality needs b in [1, 2]");
    GammaRatioBounds out;
    out.branch = branch;
    out.value = std::exp(log_gamma(a) + b * std::log(a) - log_gamma(a + b));
    if (branch == GammaBranch::first) {
        out.lower = 1.0;
        out.upper = std::pow((a + b) / a, 1.0 - b);
    } else {
        out.lower = a / (a + b - 1.0);
        out.upper = std::pow((a + b - 1.0) / a, 2.0 - b);
    }
    const double tol = 1e-12 * std::max(1.0, out.value);
    if (out.lower - out.value > tol || out.value - out.upper > tol)
        throw Error("Gamma ratio inequality violated");
    return out;
}

}  // namespace specgap
