#include "specgap/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

#include "specgap/errors.hpp"

namespace specgap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

// log(1 + e^{2t}) without overflow.
double log1p_exp2(double t) {
    return t > 0.0 ? 2.0 * t + std::log1p(std::exp(-2.0 * t)) : std::log1p(std::exp(2.0 * t));
}

ReferenceGap exact(double value, std::string source) {
    ReferenceGap g;
    g.kind = ReferenceKind::exact;
    g.value = value;
    g.lower = value;
    g.upper = value;
    g.source = std::move(source);
    return g;
}

ReferenceGap bracket(double lower, double upper, std::string source) {
    if (!(lower <= upper)) throw Error("reference bracket inverted: " + source);
    ReferenceGap g;
    g.kind = ReferenceKind::bracket;
    g.lower = lower;
    g.upper = upper;
    g.source = std::move(source);
    return g;
}

ReferenceGap order_only(double exponent, std::string source) {
    ReferenceGap g;
    g.kind = ReferenceKind::order_only;
    g.order_exponent = exponent;
    g.source = std::move(source);
    return g;
}

ReferenceGap cauchy_reference(int n, double beta, Scope scope) {
    const double half = 0.5 * n;
    const double radial = beta <= half + 2.0 ? (beta - half) * (beta - half) : 4.0 * (beta - half - 1.0);
    const std::string radial_src =
        beta <= half + 2.0 ? "cauchy-radial-(beta-n/2)^2" : "cauchy-radial-4(beta-n/2-1)";
    if (scope == Scope::radial) return exact(radial, radial_src);

    if (n == 2) {
        if (beta <= 0.5 * (3.0 + std::sqrt(5.0))) return exact(radial, "cauchy-n2-full-(beta-1)^2");
        if (beta <= 3.0) return bracket(beta, (beta - 1.0) * (beta - 1.0), "cauchy-n2-full-[beta,(beta-1)^2]");
        return bracket(beta, 2.0 * (beta - 1.0), "cauchy-n2-full-[beta,2(beta-1)]");
    }
    if (beta <= static_cast<double>(n) * (n + 2) / (n + 1)) return exact(radial, "cauchy-full-equals-radial");
    const double lower = 2.0 * beta * (n - 1) / n;
    if (beta <= n + 1.0) return bracket(lower, 4.0 * (beta - half - 1.0), "cauchy-full-[2beta(n-1)/n,4(beta-n/2-1)]");
    return bracket(lower, 2.0 * (beta - 1.0), "cauchy-full-[2beta(n-1)/n,2(beta-1)]");
}

ReferenceGap exp_power_reference(int n, double alpha, Scope scope) {
    if (scope == Scope::radial) {
        if (alpha == 2.0) return exact(2.0, "gaussian-radial-eigenpair-r^2-n");
        return order_only(1.0 - 2.0 / alpha, "exp-power-radial-order-n^(1-2/alpha)");
    }
    if (alpha == 2.0) return exact(1.0, "gaussian-full-linear-eigenfunction");
    const auto b = exp_power_explicit(n, alpha);
    return bracket(b.exact.lower, b.exact.upper, "exp-power-full-[(n-1)/m2,n/m2]");
}

}  // namespace

std::string_view to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::exponential_power: return "exp-power";
        case FamilyKind::uniform_ball: return "ball";
        case FamilyKind::generalized_cauchy: return "cauchy";
        case FamilyKind::gaussian: return "gaussian";
    }
    return "?";
}

std::string_view to_string(WeightChoice weight) {
    switch (weight) {
        case WeightChoice::unit: return "unit";
        case WeightChoice::one_plus_r2: return "one-plus-r2";
        case WeightChoice::inv_one_plus_r2: return "inv-one-plus-r2";
    }
    return "?";
}

FamilyKind parse_family(std::string_view name) {
    for (auto k : {FamilyKind::exponential_power, FamilyKind::uniform_ball, FamilyKind::generalized_cauchy,
                   FamilyKind::gaussian})
        if (to_string(k) == name) return k;
    throw InvalidInput("unknown family '" + std::string(name) + "'");
}

WeightChoice parse_weight(std::string_view name) {
    for (auto w : {WeightChoice::unit, WeightChoice::one_plus_r2, WeightChoice::inv_one_plus_r2})
        if (to_string(w) == name) return w;
    throw InvalidInput("unknown weight '" + std::string(name) + "'");
}

std::string_view to_string(ReferenceKind kind) {
    switch (kind) {
        case ReferenceKind::exact: return "exact";
        case ReferenceKind::bracket: return "bracket";
        case ReferenceKind::order_only: return "order_only";
        case ReferenceKind::none: return "none";
    }
    return "?";
}

std::string_view to_string(Scope scope) { return scope == Scope::radial ? "radial" : "full"; }

void FamilySpec::validate() const {
    if (n < 2) throw InvalidInput("dimension must be >= 2");
    if (n > 4096) throw InvalidInput("dimension too large");
    if (family == FamilyKind::exponential_power && !(std::isfinite(alpha) && alpha >= 1.0))
        throw InvalidInput("exp-power requires finite alpha >= 1");
    if (family == FamilyKind::generalized_cauchy && !(std::isfinite(beta) && beta > 0.5 * n))
        throw InvalidInput("cauchy requires finite beta > n/2");
}

std::string FamilySpec::label() const {
    std::string s(to_string(family));
    s += " n=" + std::to_string(n);
    if (family == FamilyKind::exponential_power) s += " alpha=" + fmt(alpha);
    if (family == FamilyKind::generalized_cauchy) s += " beta=" + fmt(beta);
    s += " weight=" + std::string(to_string(weight));
    return s;
}

RadialPotential exponential_power_potential(double alpha) {
    RadialPotential p;
    p.v = [alpha](double r) { return std::pow(r, alpha) / alpha; };
    p.dv = [alpha](double r) { return std::pow(r, alpha - 1.0); };
    p.d2v = [alpha](double r) { return alpha == 1.0 ? 0.0 : (alpha - 1.0) * std::pow(r, alpha - 2.0); };
    p.v_at_log = [alpha](double t) { return std::exp(alpha * t) / alpha; };
    p.convex = alpha >= 1.0;
    return p;
}

RadialPotential ball_potential() {
    RadialPotential p;
    p.v = [](double) { return 0.0; };
    p.dv = [](double) { return 0.0; };
    p.d2v = [](double) { return 0.0; };
    p.v_at_log = [](double) { return 0.0; };
    p.domain_end = 1.0;
    p.convex = true;
    return p;
}

RadialPotential cauchy_potential(double beta) {
    RadialPotential p;
    p.v = [beta](double r) { return beta * std::log1p(r * r); };
    p.dv = [beta](double r) {
        if (r <= 1.0) return 2.0 * beta * r / (1.0 + r * r);
        const double q = 1.0 / r;
        return 2.0 * beta * q / (1.0 + q * q);
    };
    p.d2v = [beta](double r) {
        if (r <= 1.0) {
            const double s = 1.0 + r * r;
            return 2.0 * beta * (1.0 - r * r) / (s * s);
        }
        const double q = 1.0 / r;
        const double s = 1.0 + q * q;
        return 2.0 * beta * q * q * (q * q - 1.0) / (s * s);
    };
    p.v_at_log = [beta](double t) { return beta * log1p_exp2(t); };
    p.convex = false;
    return p;
}

Weight make_weight(WeightChoice choice) {
    if (choice == WeightChoice::unit) return Weight::unit();
    Weight w;
    if (choice == WeightChoice::one_plus_r2) {
        w.s2 = [](double r) { return 1.0 + r * r; };
        w.ds2 = [](double r) { return 2.0 * r; };
        w.d2s2 = [](double) { return 2.0; };
        w.s = [](double r) { return std::hypot(1.0, r); };
        w.ds = [](double r) { return r / std::hypot(1.0, r); };
        w.d2s = [](double r) {
            const double s = std::hypot(1.0, r);
            return 1.0 / s / s / s;
        };
        w.log_s2_at_log = [](double t) { return log1p_exp2(t); };
        return w;
    }
    w.s2 = [](double r) { return 1.0 / (1.0 + r * r); };
    w.ds2 = [](double r) {
        const double q = 1.0 + r * r;
        return -2.0 * r / q / q;
    };
    w.d2s2 = [](double r) {
        const double q = 1.0 + r * r;
        return (6.0 * r * r - 2.0) / q / q / q;
    };
    w.s = [](double r) { return 1.0 / std::hypot(1.0, r); };
    w.ds = [](double r) {
        const double s = std::hypot(1.0, r);
        return -r / s / s / s;
    };
    w.d2s = [](double r) {
        const double s = std::hypot(1.0, r);
        return (2.0 * r * r - 1.0) / s / s / s / s / s;
    };
    w.log_s2_at_log = [](double t) { return -log1p_exp2(t); };
    return w;
}

CandidateFunction linear_candidate() {
    CandidateFunction c;
    c.f = [](double r) { return r; };
    c.df = [](double) { return 1.0; };
    c.d2f = [](double) { return 0.0; };
    c.d3f = [](double) { return 0.0; };
    c.defect = [](double) { return -1.0; };
    c.monotone = true;
    c.label = "r";
    return c;
}

CandidateFunction power_candidate(double p) {
    if (p == 0.0 || !std::isfinite(p)) throw InvalidInput("power candidate needs finite p != 0");
    CandidateFunction c;
    c.f = [p](double r) { return std::pow(r, p); };
    c.df = [p](double r) { return p * std::pow(r, p - 1.0); };
    c.d2f = [p](double r) { return p * (p - 1.0) * std::pow(r, p - 2.0); };
    c.d3f = [p](double r) { return p * (p - 1.0) * (p - 2.0) * std::pow(r, p - 3.0); };
    c.defect = [p](double r) { return p * (p - 2.0) * std::pow(r, p - 1.0); };
    c.monotone = p > 0.0;
    c.label = "r^" + fmt(p);
    return c;
}

CandidateFunction one_plus_r2_power_candidate(double e) {
    if (e == 0.0 || !std::isfinite(e)) throw InvalidInput("(1+r^2)^e candidate needs finite e != 0");
    CandidateFunction c;
    c.f = [e](double r) { return std::pow(1.0 + r * r, e); };
    c.df = [e](double r) { return 2.0 * e * r * std::pow(1.0 + r * r, e - 1.0); };
    c.d2f = [e](double r) {
        return 2.0 * e * std::pow(1.0 + r * r, e - 2.0) * (1.0 + (2.0 * e - 1.0) * r * r);
    };
    c.d3f = [e](double r) {
        return 4.0 * e * (e - 1.0) * r * std::pow(1.0 + r * r, e - 3.0) * (3.0 + (2.0 * e - 1.0) * r * r);
    };
    c.defect = [e](double r) { return 4.0 * e * (e - 1.0) * r * r * r * std::pow(1.0 + r * r, e - 2.0); };
    c.monotone = e > 0.0;
    c.label = "(1+r^2)^" + fmt(e);
    return c;
}

CandidateFunction power_derivative_candidate(double q) {
    if (!std::isfinite(q)) throw InvalidInput("power derivative candidate needs finite q");
    CandidateFunction c;
    if (q == -1.0)
        c.f = [](double r) { return std::log(r); };
    else
        c.f = [q](double r) { return std::pow(r, q + 1.0) / (q + 1.0); };
    c.df = [q](double r) { return std::pow(r, q); };
    c.d2f = [q](double r) { return q * std::pow(r, q - 1.0); };
    c.d3f = [q](double r) { return q * (q - 1.0) * std::pow(r, q - 2.0); };
    c.defect = [q](double r) { return (q - 1.0) * std::pow(r, q); };
    c.monotone = true;
    c.label = "f'=r^" + fmt(q);
    return c;
}

CandidateFunction designated_candidate(const FamilySpec& spec) {
    spec.validate();
    switch (spec.family) {
        case FamilyKind::gaussian:
        case FamilyKind::exponential_power: return power_candidate(2.0);
        case FamilyKind::uniform_ball: return power_derivative_candidate(-0.5 * (spec.n - 1));
        case FamilyKind::generalized_cauchy:
            if (spec.beta <= 0.5 * spec.n + 2.0) return one_plus_r2_power_candidate(0.5 * spec.beta - 0.25 * spec.n);
            return power_candidate(2.0);
    }
    throw InvalidInput("unknown family");
}

std::vector<CandidateFunction> rayleigh_candidates(const FamilySpec& spec) {
    std::vector<CandidateFunction> out;
    out.push_back(designated_candidate(spec));
    out.push_back(linear_candidate());
    out.push_back(power_candidate(2.0));
    if (spec.family == FamilyKind::uniform_ball) out.push_back(power_derivative_candidate(0.5 * (spec.n - 1)));
    if (spec.family == FamilyKind::generalized_cauchy)
        out.push_back(one_plus_r2_power_candidate(0.4 * (spec.beta - 0.5 * spec.n)));
    std::vector<CandidateFunction> unique;
    for (auto& c : out)
        if (std::none_of(unique.begin(), unique.end(), [&](const auto& u) { return u.label == c.label; }))
            unique.push_back(std::move(c));
    return unique;
}

Family make_family(const FamilySpec& spec, double tail_tol) {
    spec.validate();
    RadialPotential potential;
    switch (spec.family) {
        case FamilyKind::exponential_power: potential = exponential_power_potential(spec.alpha); break;
        case FamilyKind::gaussian: potential = exponential_power_potential(2.0); break;
        case FamilyKind::uniform_ball: potential = ball_potential(); break;
        case FamilyKind::generalized_cauchy: potential = cauchy_potential(spec.beta); break;
    }
    Family fam{spec, build_measure(spec.n, std::move(potential), tail_tol), make_weight(spec.weight),
               designated_candidate(spec)};
    if (spec.weight != WeightChoice::unit) validate_weight(fam.weight, fam.measure);
    return fam;
}

ReferenceGap reference_gap(const FamilySpec& spec, Scope scope) {
    spec.validate();
    const int n = spec.n;
    switch (spec.family) {
        case FamilyKind::exponential_power:
            if (spec.weight == WeightChoice::unit) return exp_power_reference(n, spec.alpha, scope);
            break;
        case FamilyKind::uniform_ball:
            if (spec.weight != WeightChoice::unit) break;
            if (scope == Scope::full)
                return bracket((n - 1.0) * (n + 2.0) / n, n + 2.0, "ball-full-[(n-1)(n+2)/n,n+2]");
            else {
                ReferenceGap g = bracket(0.25 * (static_cast<double>(n) * n - 1.0), kInf, "ball-radial-lower-(n^2-1)/4");
                g.order_exponent = 2.0;
                return g;
            }
        case FamilyKind::generalized_cauchy:
            if (spec.weight == WeightChoice::one_plus_r2) return cauchy_reference(n, spec.beta, scope);
            break;
        case FamilyKind::gaussian:
            if (spec.weight == WeightChoice::unit) return exp_power_reference(n, 2.0, scope);
            if (spec.weight == WeightChoice::one_plus_r2) {
                if (scope == Scope::full) return bracket(n - 1.0, n + 1.0, "gaussian-weight-1+r^2-full-[n-1,n+1]");
                return bracket(n >= 3 ? 4.0 * (n - 2) : 4.0, kInf, "gaussian-weight-1+r^2-radial-lower");
            }
            if (scope == Scope::full)
                return bracket((n - 1.0) / (static_cast<double>(n) * (n + 3)),
                               n > 2 ? std::min(1.0 / (n - 2.0), 1.0) : 1.0,
                               "gaussian-weight-1/(1+r^2)-full");
            break;
    }
    return {};
}

std::vector<FamilySpec> catalog_grid() {
    std::vector<FamilySpec> out;
    for (double alpha : {1.0, 1.5, 2.0, 4.0})
        for (int n : {2, 3, 5, 8}) out.push_back({FamilyKind::exponential_power, n, alpha, 0.0, WeightChoice::unit});
    for (int n : {2, 3, 4, 6, 8}) out.push_back({FamilyKind::uniform_ball, n, 2.0, 0.0, WeightChoice::unit});
    const std::vector<std::pair<int, std::vector<double>>> cauchy = {
        {2, {1.5, 2.0, 2.5, 3.0, 4.0, 6.0}},
        {3, {1.6, 2.5, 3.5, 3.75, 4.0, 4.5, 6.0}},
        {4, {2.5, 3.0, 4.0, 4.8, 5.0, 6.0}},
        {6, {3.5, 4.0, 5.0, 6.0, 8.0}},
    };
    for (const auto& [n, betas] : cauchy)
        for (double beta : betas)
            out.push_back({FamilyKind::generalized_cauchy, n, 2.0, beta, WeightChoice::one_plus_r2});
    for (int n : {2, 3, 4, 6}) out.push_back({FamilyKind::gaussian, n, 2.0, 0.0, WeightChoice::unit});
    for (auto w : {WeightChoice::one_plus_r2, WeightChoice::inv_one_plus_r2})
        for (int n : {2, 3, 4, 5, 6, 8}) out.push_back({FamilyKind::gaussian, n, 2.0, 0.0, w});

    auto key = [](const FamilySpec& s) {
        const double param = s.family == FamilyKind::generalized_cauchy ? s.beta
                             : s.family == FamilyKind::exponential_power ? s.alpha
                                                                         : 0.0;
        return std::make_tuple(static_cast<int>(s.family), static_cast<int>(s.weight), s.n, param);
    };
    std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    return out;
}

}  // namespace specgap
