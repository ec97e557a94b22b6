#include "specgap/radial_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "log_integral.hpp"
#include "specgap/errors.hpp"
#include "specgap/quadrature.hpp"

namespace specgap {

namespace {

constexpr int kTableNodes = 4096;
constexpr double kConvexTolerance = 1e-10;

std::string format_radius(double r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", r);
    return buf;
}

double checked_potential(const RadialPotential& p, double t) {
    double v;
    try {
        v = p.value_at_log(t);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw DomainError("potential evaluation failed at r = " + format_radius(std::exp(t)) + ": " +
                          e.what());
    }
    if (std::isnan(v))
        throw DomainError("potential is NaN at r = " + format_radius(std::exp(t)));
    return v;
}

}  // namespace

double RadialPotential::value_at_log(double t) const {
    if (v_at_log)
        return v_at_log(t);
    return v(std::exp(t));
}

bool RadialPotential::bounded() const {
    return std::isfinite(domain_end);
}

double Weight::log_s2(double t) const {
    if (log_s2_at_log)
        return log_s2_at_log(t);
    return std::log(s2(std::exp(t)));
}

Weight Weight::unit() {
    Weight w;
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    w.s2 = one;
    w.ds2 = zero;
    w.d2s2 = zero;
    w.s = one;
    w.ds = zero;
    w.d2s = zero;
    w.log_s2_at_log = zero;
    w.unit_ = true;
    return w;
}

BoundBracket make_bracket(double lower, double upper, std::string lower_source,
                          std::string upper_source) {
    if (std::isnan(lower) || std::isnan(upper))
        throw Error("bracket endpoints must not be NaN");
    if (lower < 0.0)
        throw Error("bracket lower side is negative");
    if (lower > upper)
        throw Error("bracket is inverted: lower " + std::to_string(lower) + " > upper " +
                    std::to_string(upper));
    return {lower, upper, std::move(lower_source), std::move(upper_source)};
}

double RadialMeasure::z() const {
    return std::exp(log_z_);
}

double RadialMeasure::r_max() const {
    if (potential_.bounded() && table_t_.back() >= std::log(potential_.domain_end))
        return potential_.domain_end;
    return std::exp(table_t_.back());
}

double RadialMeasure::log_density_at_log(double t) const {
    if (potential_.bounded() && t > std::log(potential_.domain_end))
        return -std::numeric_limits<double>::infinity();
    return n_ * t - checked_potential(potential_, t) - log_z_;
}

double RadialMeasure::log_density(double r) const {
    if (!(r > 0.0))
        return -std::numeric_limits<double>::infinity();
    const double t = std::log(r);
    return log_density_at_log(t) - t;
}

double RadialMeasure::table_cdf_at(double t) const {
    const auto& x = table_t_;
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t k = static_cast<std::size_t>(it - x.begin());
    if (k == 0)
        return table_f_.front();
    if (k >= x.size())
        return table_f_.back();
    --k;
    const double h = x[k + 1] - x[k];
    const double s = (t - x[k]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    const double v = h00 * table_f_[k] + h10 * h * table_slope_[k] + h01 * table_f_[k + 1] +
                     h11 * h * table_slope_[k + 1];
    return std::clamp(v, table_f_[k], table_f_[k + 1]);
}

double RadialMeasure::cdf(double r) const {
    if (!(r > 0.0))
        return 0.0;
    if (potential_.bounded() && r >= potential_.domain_end)
        return 1.0;
    const double t = std::log(r);
    if (t < table_t_.front()) {
        // below the table the CDF follows its local power law
        const double rate = table_slope_.front() / table_f_.front();
        return table_f_.front() * std::exp(rate * (t - table_t_.front()));
    }
    if (t <= table_t_.back())
        return exact_cdf_at(t);
    return 1.0 - tail_mass(r);
}

double RadialMeasure::exact_cdf_at(double t) const {
    auto it = std::upper_bound(table_t_.begin(), table_t_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - table_t_.begin());
    k = std::clamp<std::size_t>(k, 1, table_t_.size()) - 1;
    const double t0 = table_t_[k];
    if (t <= t0)
        return table_f_[k];
    auto dens = [this](double s) { return std::exp(log_density_at_log(s)); };
    return table_f_[k] + kronrod15(dens, t0, t).value;
}

double RadialMeasure::tail_mass(double r) const {
    if (!(r > 0.0))
        return 1.0;
    if (potential_.bounded() && r >= potential_.domain_end)
        return 0.0;
    const double t = std::log(r);
    if (t < table_t_.front())
        return 1.0 - cdf(r);
    detail::LogIntegralWindow w;
    w.lo_limit = t;
    w.hi_limit = potential_.bounded() ? std::log(potential_.domain_end)
                                      : std::numeric_limits<double>::infinity();
    w.scan_lo = t;
    w.scan_hi = std::max(t + 1.0, table_t_.back());
    auto L = [this](double s) { return log_density_at_log(s); };
    const double value = std::exp(detail::log_integral(L, w, 1e-12).log_value);
    return std::clamp(value, 0.0, 1.0);
}

double RadialMeasure::quantile(double u) const {
    if (!(u > 0.0))
        return 0.0;
    if (u >= table_f_.back())
        return r_max();
    if (u <= table_f_.front()) {
        const double rate = table_slope_.front() / table_f_.front();
        return std::exp(table_t_.front() + std::log(u / table_f_.front()) / rate);
    }
    auto it = std::upper_bound(table_f_.begin(), table_f_.end(), u);
    std::size_t k = static_cast<std::size_t>(it - table_f_.begin());
    k = std::clamp<std::size_t>(k, 1, table_f_.size() - 1) - 1;
    const double h = table_t_[k + 1] - table_t_[k];
    const double f0 = table_f_[k];
    const double f1 = table_f_[k + 1];
    const double d0 = h * table_slope_[k];
    const double d1 = h * table_slope_[k + 1];
    // solve the monotone Hermite cubic H(s) = u on [0, 1] by safeguarded Newton
    double lo = 0.0;
    double hi = 1.0;
    double s = f1 > f0 ? (u - f0) / (f1 - f0) : 0.5;
    for (int iter = 0; iter < 100; ++iter) {
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double value = (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * d0 +
                             (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * d1;
        const double deriv = (6 * s2 - 6 * s) * f0 + (3 * s2 - 4 * s + 1) * d0 +
                             (-6 * s2 + 6 * s) * f1 + (3 * s2 - 2 * s) * d1;
        const double g = value - u;
        if (g > 0)
            hi = s;
        else
            lo = s;
        double next = deriv > 0 ? s - g / deriv : 0.5 * (lo + hi);
        if (!(next >= lo && next <= hi))
            next = 0.5 * (lo + hi);
        const bool done = std::abs(next - s) <= 1e-15 || hi - lo <= 1e-15;
        s = next;
        if (done)
            break;
    }
    // polish against the exact CDF so that cdf(quantile(u)) = u to quadrature accuracy
    double t = table_t_[k] + s * h;
    for (int iter = 0; iter < 3; ++iter) {
        const double density = std::exp(log_density_at_log(t));
        if (!(density > 0.0))
            break;
        const double next = std::clamp(t - (exact_cdf_at(t) - u) / density, table_t_[k], table_t_[k + 1]);
        if (next == t)
            break;
        t = next;
    }
    return std::exp(t);
}

double RadialMeasure::log_expectation(const LogIntegrand& log_g, double rel_tol) const {
    auto L = [&](double t) {
        const double lg = log_g(t);
        if (std::isnan(lg))
            throw DomainError("integrand is NaN at r = " + format_radius(std::exp(t)));
        if (lg == -std::numeric_limits<double>::infinity())
            return lg;
        return lg + log_density_at_log(t);
    };
    detail::LogIntegralWindow w;
    w.lo_limit = -std::numeric_limits<double>::infinity();
    w.hi_limit = potential_.bounded() ? std::log(potential_.domain_end)
                                      : std::numeric_limits<double>::infinity();
    w.scan_lo = scan_lo_;
    w.scan_hi = scan_hi_;
    return detail::log_integral(L, w, rel_tol).log_value;
}

double RadialMeasure::expectation(const LogIntegrand& log_g, double rel_tol) const {
    return std::exp(log_expectation(log_g, rel_tol));
}

double RadialMeasure::expectation_signed(const RealFunction& g, double rel_tol) const {
    auto part = [&](double sign) {
        return expectation(
            [&, sign](double t) {
                const double v = sign * g(std::exp(t));
                if (std::isnan(v))
                    throw DomainError("integrand is NaN at r = " + format_radius(std::exp(t)));
                return v > 0 ? std::log(v) : -std::numeric_limits<double>::infinity();
            },
            rel_tol);
    };
    return part(1.0) - part(-1.0);
}

std::vector<double> RadialMeasure::diagnostic_radii(int count) const {
    double t_lo = std::log(quantile(1e-9));
    double t_hi = std::log(quantile(1.0 - 1e-9));
    if (potential_.bounded())
        t_hi = std::min(t_hi, std::log(potential_.domain_end) + std::log1p(-1e-4));
    if (!(t_hi > t_lo))
        t_hi = t_lo + 1e-3;
    std::vector<double> radii(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        radii[static_cast<std::size_t>(i)] = std::exp(t_lo + (t_hi - t_lo) * i / (count - 1));
    return radii;
}

bool derivative_consistent(const RealFunction& f, const RealFunction& df, double r) {
    const double h = 1e-5 * r;
    const double fr = f(r);
    const double analytic = df(r);
    const double fd = (f(r + h) - f(r - h)) / (2.0 * h);
    if (!std::isfinite(fr) || !std::isfinite(analytic))
        return false;
    if (!std::isfinite(fd))
        return true;  // difference quotient overflowed; nothing to compare against
    const double tol = 1e-5 * std::abs(analytic) + 1e-9 * std::abs(fr) / r + 1e-300;
    return std::abs(fd - analytic) <= tol;
}

RadialMeasure build_measure(int n, RadialPotential potential, double tail_tol) {
    if (n < 2)
        throw InvalidInput("dimension must be at least 2");
    if (!(tail_tol > 0.0 && tail_tol <= 1e-2))
        throw InvalidInput("tail_tol must lie in (0, 1e-2]");
    if (!potential.v && !potential.v_at_log)
        throw InvalidInput("potential has no value function");
    if (!potential.dv || !potential.d2v)
        throw InvalidInput("potential derivatives must be supplied");
    if (!(potential.domain_end > 0.0))
        throw InvalidInput("domain end must be positive");

    RadialMeasure m;
    m.n_ = n;
    m.potential_ = std::move(potential);
    m.tail_tol_ = tail_tol;
    const auto& pot = m.potential_;
    const bool bounded = pot.bounded();
    const double t_end = bounded ? std::log(pot.domain_end) : std::numeric_limits<double>::infinity();

    auto raw = [&](double t) {
        if (t > t_end)
            return -std::numeric_limits<double>::infinity();
        return n * t - checked_potential(pot, t);
    };
    detail::LogIntegralWindow w;
    w.lo_limit = -std::numeric_limits<double>::infinity();
    w.hi_limit = t_end;
    w.scan_hi = bounded ? t_end : 30.0;
    w.scan_lo = std::min(-30.0, w.scan_hi - 30.0);
    const auto zres = detail::log_integral(raw, w, 1e-13);
    if (!std::isfinite(zres.log_value))
        throw NonIntegrable("normalization constant is not finite");
    m.log_z_ = zres.log_value;
    const double log_z = m.log_z_;
    auto dens = [&](double t) { return std::exp(raw(t) - log_z); };

    // Pass 1: uniform nodes over the whole window; locate the truncation node.
    const double lo = zres.lo;
    const double hi = zres.hi;
    const double scale = std::exp(zres.peak - log_z);
    const double left_mass = zres.tail_lo * scale;
    const double right_mass = zres.tail_hi * scale;
    std::vector<double> t1(kTableNodes), piece1(kTableNodes - 1);
    for (int i = 0; i < kTableNodes; ++i)
        t1[i] = lo + (hi - lo) * i / (kTableNodes - 1);
    for (int i = 0; i + 1 < kTableNodes; ++i)
        piece1[i] = kronrod15(dens, t1[i], t1[i + 1]).value;
    std::vector<double> tail1(kTableNodes), cum1(kTableNodes);
    tail1[kTableNodes - 1] = right_mass;
    for (int i = kTableNodes - 2; i >= 0; --i)
        tail1[i] = tail1[i + 1] + piece1[i];
    cum1[0] = left_mass;
    for (int i = 1; i < kTableNodes; ++i)
        cum1[i] = cum1[i - 1] + piece1[i - 1];
    int cut = -1;
    for (int i = 0; i < kTableNodes; ++i) {
        if (tail1[i] < tail_tol) {
            cut = i;
            break;
        }
    }
    if (cut < 0)
        throw NonIntegrable("tail mass beyond the probing horizon exceeds tail_tol");
    if (cut < 16)
        cut = std::min(16, kTableNodes - 1);
    const double t_cut = t1[cut];

    // Pass 2: half the nodes uniform in log r, half equidistributing mass.
    std::vector<double> grade(cut + 1);
    const double mass_span = std::max(cum1[cut] - cum1[0], 1e-300);
    for (int i = 0; i <= cut; ++i)
        grade[i] = 0.5 * (t1[i] - lo) / (t_cut - lo) + 0.5 * (cum1[i] - cum1[0]) / mass_span;
    std::vector<double> t2(kTableNodes);
    int j = 0;
    for (int k = 0; k < kTableNodes; ++k) {
        const double g = static_cast<double>(k) / (kTableNodes - 1);
        while (j + 1 < cut && grade[j + 1] < g)
            ++j;
        const double span = grade[j + 1] - grade[j];
        const double frac = span > 0 ? std::clamp((g - grade[j]) / span, 0.0, 1.0) : 0.0;
        t2[k] = t1[j] + frac * (t1[j + 1] - t1[j]);
    }
    t2.front() = lo;
    t2.back() = t_cut;
    std::vector<double> f2(kTableNodes), slope2(kTableNodes);
    f2[0] = left_mass;
    for (int k = 1; k < kTableNodes; ++k) {
        auto piece = kronrod15(dens, t2[k - 1], t2[k]);
        double value = piece.value;
        if (piece.error > 1e-15 + 1e-10 * piece.value)
            value = integrate(dens, t2[k - 1], t2[k], 1e-13).value;
        f2[k] = f2[k - 1] + value;
    }
    const double consistency = f2.back() + tail1[cut] - 1.0;
    if (std::abs(consistency) > 1e-9)
        throw DomainError("radial measure normalization check failed (defect " +
                          std::to_string(consistency) + ")");
    for (int k = 0; k < kTableNodes; ++k)
        slope2[k] = dens(t2[k]);
    // clamp slopes to three secants so the Hermite interpolant stays monotone
    for (int k = 0; k < kTableNodes; ++k) {
        double limit = std::numeric_limits<double>::infinity();
        if (k > 0)
            limit = std::min(limit, 3.0 * (f2[k] - f2[k - 1]) / (t2[k] - t2[k - 1]));
        if (k + 1 < kTableNodes)
            limit = std::min(limit, 3.0 * (f2[k + 1] - f2[k]) / (t2[k + 1] - t2[k]));
        slope2[k] = std::clamp(slope2[k], 0.0, std::max(limit, 0.0));
    }
    if (!(slope2.front() > 0.0))
        slope2.front() = (f2[1] - f2[0]) / (t2[1] - t2[0]);
    m.table_t_ = std::move(t2);
    m.table_f_ = std::move(f2);
    m.table_slope_ = std::move(slope2);
    m.scan_lo_ = m.table_t_.front();
    m.scan_hi_ = m.table_t_.back();

    // Derivative and convexity self-checks on the bulk.
    for (double r : m.diagnostic_radii()) {
        if (!pot.v)
            break;
        if (!derivative_consistent(pot.v, pot.dv, r))
            throw DomainError("supplied V' disagrees with finite differences at r = " + format_radius(r));
        if (!derivative_consistent(pot.dv, pot.d2v, r))
            throw DomainError("supplied V'' disagrees with finite differences at r = " + format_radius(r));
        if (pot.convex && pot.d2v(r) < -kConvexTolerance)
            throw DomainError("potential flagged convex but V''(" + format_radius(r) + ") < 0");
    }
    return m;
}

double moment(const RadialMeasure& measure, int k) {
    if (k < 0)
        throw InvalidInput("moment order must be nonnegative");
    return measure.expectation([k](double t) { return k * t; }, 1e-13);
}

double weighted_moment(const RadialMeasure& measure, const Weight& weight, WeightedMomentKind kind) {
    if (kind == WeightedMomentKind::r2_over_s2)
        return measure.expectation([&](double t) { return 2.0 * t - weight.log_s2(t); }, 1e-13);
    return measure.expectation([&](double t) { return weight.log_s2(t); }, 1e-13);
}

EffectivePotential effective_potential(const RadialMeasure& measure) {
    const int n = measure.dimension();
    const RadialPotential p = measure.potential();
    auto guard = [](double r) {
        if (!(r > 0.0))
            throw DomainError("effective potential requires r > 0");
    };
    EffectivePotential u;
    u.u = [p, n, guard](double r) {
        guard(r);
        return p.v(r) - (n - 1) * std::log(r);
    };
    u.du = [p, n, guard](double r) {
        guard(r);
        return p.dv(r) - (n - 1) / r;
    };
    u.d2u = [p, n, guard](double r) {
        guard(r);
        return p.d2v(r) + (n - 1) / (r * r);
    };
    return u;
}

RealFunction drift(const RadialMeasure& measure, const Weight& weight) {
    const int n = measure.dimension();
    const RealFunction dv = measure.potential().dv;
    return [n, dv, weight](double r) {
        if (!(r > 0.0))
            throw DomainError("drift requires r > 0");
        return weight.ds2(r) - weight.s2(r) * (dv(r) - (n - 1) / r);
    };
}

RealFunction drift_derivative(const RadialMeasure& measure, const Weight& weight) {
    const int n = measure.dimension();
    const RealFunction dv = measure.potential().dv;
    const RealFunction d2v = measure.potential().d2v;
    return [n, dv, d2v, weight](double r) {
        if (!(r > 0.0))
            throw DomainError("drift requires r > 0");
        return weight.d2s2(r) - weight.ds2(r) * (dv(r) - (n - 1) / r) -
               weight.s2(r) * (d2v(r) + (n - 1) / (r * r));
    };
}

double tail_mass(const RadialMeasure& measure, double r) {
    return measure.tail_mass(r);
}

void validate_weight(const Weight& weight, const RadialMeasure& measure) {
    if (!weight.s2 || !weight.ds2 || !weight.d2s2 || !weight.s || !weight.ds || !weight.d2s)
        throw InvalidInput("weight must supply sigma^2, sigma and their first two derivatives");
    if (weight.is_unit())
        return;
    for (double r : measure.diagnostic_radii()) {
        const double s2 = weight.s2(r);
        if (!(s2 > 0.0) || !std::isfinite(s2))
            throw DomainError("weight is not elliptic at r = " + format_radius(r));
        const double s = weight.s(r);
        if (std::abs(s * s - s2) > 1e-12 * s2)
            throw DomainError("sigma^2 and sigma disagree at r = " + format_radius(r));
        if (!derivative_consistent(weight.s2, weight.ds2, r) ||
            !derivative_consistent(weight.ds2, weight.d2s2, r))
            throw DomainError("supplied derivatives of sigma^2 disagree with finite differences at r = " +
                              format_radius(r));
        if (!derivative_consistent(weight.s, weight.ds, r) ||
            !derivative_consistent(weight.ds, weight.d2s, r))
            throw DomainError("supplied derivatives of sigma disagree with finite differences at r = " +
                              format_radius(r));
    }
}

}  // namespace specgap
