#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "CLI11.hpp"
#include "specgap/bounds.hpp"
#include "specgap/errors.hpp"
#include "specgap/parallel.hpp"
#include "specgap/sampler.hpp"
#include "specgap/special_functions.hpp"

namespace specgap::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Json echo(const Options& o, bool with_family = true) {
    Json j = Json::object();
    if (with_family) {
        j["family"] = std::string(to_string(o.spec.family));
        j["n"] = o.spec.n;
        if (o.spec.family == FamilyKind::exponential_power) j["alpha"] = number(o.spec.alpha);
        if (o.spec.family == FamilyKind::generalized_cauchy) j["beta"] = number(o.spec.beta);
        j["weight"] = std::string(to_string(o.spec.weight));
    }
    j["cells"] = o.cells;
    j["grading"] = o.grading == Grading::logarithmic ? "logarithmic" : "uniform";
    j["tail_tol"] = number(o.tail_tol);
    j["seed"] = o.seed;
    return j;
}

Record make_record(std::string section, std::string name, double value, std::string source = {},
                   std::string status = "ok") {
    Record r;
    r.section = std::move(section);
    r.name = std::move(name);
    r.value = value;
    r.source = std::move(source);
    r.status = std::move(status);
    return r;
}

Record bracket_record(std::string section, std::string name, const BoundBracket& b) {
    Record r;
    r.section = std::move(section);
    r.name = std::move(name);
    r.lower = b.lower;
    r.upper = b.upper;
    r.source = b.lower_source == b.upper_source ? b.lower_source : b.lower_source + "/" + b.upper_source;
    r.status = "ok";
    return r;
}

Record reference_record(const FamilySpec& spec, Scope scope) {
    const ReferenceGap g = reference_gap(spec, scope);
    Record r;
    r.section = "reference";
    r.name = std::string(to_string(scope));
    r.value = g.kind == ReferenceKind::order_only ? kNaN : g.value;
    r.lower = g.lower;
    r.upper = g.upper;
    r.error = kNaN;
    r.source = g.source;
    r.status = std::string(to_string(g.kind));
    if (!std::isnan(g.order_exponent)) {
        r.name += "-order-exponent";
        r.value = g.order_exponent;
    }
    return r;
}

double best_of(const std::vector<Record>& recs, const std::string& section, bool maximum) {
    double best = maximum ? -kInf : kInf;
    for (const auto& r : recs)
        if (r.section == section && std::isfinite(r.value))
            best = maximum ? std::max(best, r.value) : std::min(best, r.value);
    return best;
}

bool log_concave_unit(const Family& f) { return f.weight.is_unit() && f.measure.potential().convex; }

/// Full-dynamics comparison bracket from a radial gap value (or radial bounds).
std::optional<Record> comparison_record(const Family& f, double radial_lower, double radial_upper,
                                        const std::string& name) {
    if (!(radial_lower >= 0.0) || !(radial_upper >= 0.0)) return std::nullopt;
    try {
        const int n = f.measure.dimension();
        const double m2 = moment(f.measure, 2);
        if (f.weight.is_unit()) {
            if (!f.measure.potential().convex) return std::nullopt;
            BoundBracket b = spectral_comparison(radial_lower, n, m2);
            b.upper = spectral_comparison(radial_upper, n, m2).upper;
            return bracket_record("full", name, b);
        }
        const double mr = weighted_moment(f.measure, f.weight, WeightedMomentKind::r2_over_s2);
        const double ms = weighted_moment(f.measure, f.weight, WeightedMomentKind::s2);
        BoundBracket b = weighted_comparison(radial_lower, n, mr, ms, m2);
        b.upper = weighted_comparison(radial_upper, n, mr, ms, m2).upper;
        return bracket_record("full", name, b);
    } catch (const NonIntegrable&) {
        return std::nullopt;
    }
}

CandidateFunction shifted(CandidateFunction c, double shift) {
    auto f = c.f;
    c.f = [f, shift](double r) { return f(r) - shift; };
    return c;
}

double relative_error(double value, double reference) { return std::abs(value / reference - 1.0); }

}  // namespace

GridSpec Options::grid() const {
    GridSpec g;
    g.n_cells = cells;
    g.grading = grading;
    return g;
}

std::vector<Record> radial_bound_records(const Family& family) {
    std::vector<Record> out;
    const auto& m = family.measure;
    const auto& w = family.weight;
    auto attempt = [&](const std::string& section, const std::string& name, const char* src, auto&& fn) {
        Record r = make_record(section, name, kNaN, src);
        try {
            fn(r);
        } catch (const HypothesisFailed&) {
            r.status = "hypothesis_failed";
        } catch (const NonIntegrable&) {
            r.status = "not_integrable";
        } catch (const DegenerateFunction&) {
            r.status = "degenerate";
        }
        out.push_back(std::move(r));
    };
    auto from_bound = [](Record& r, const BoundValue& b) {
        r.value = b.value;
        r.source = b.source;
        r.status = std::string(to_string(b.status));
    };
    if (log_concave_unit(family))
        attempt("radial-lower", "bj-radial", source::second_moment_radial,
                [&](Record& r) { from_bound(r, bj_radial_lower(m)); });
    if (w.is_unit())
        attempt("radial-lower", "bj", source::integrated_bakry_emery, [&](Record& r) { from_bound(r, bj_lower(m)); });
    attempt("radial-lower", "bj-weighted", source::weighted_bakry_emery,
            [&](Record& r) { from_bound(r, bj_weighted_lower(m, w)); });
    attempt("radial-lower", "chen:" + family.candidate.label, source::chen_variational,
            [&](Record& r) { from_bound(r, chen_lower(m, w, family.candidate)); });
    for (const auto& c : rayleigh_candidates(family.spec))
        attempt("radial-upper", "rayleigh:" + c.label, source::rayleigh_quotient,
                [&](Record& r) { r.value = rayleigh_upper(m, w, c); });
    return out;
}

CaseEvaluation evaluate_case(const FamilySpec& spec, const GridSpec& grid, double tail_tol) {
    const Family fam = make_family(spec, tail_tol);
    CaseEvaluation ev;
    ev.spec = spec;
    ev.gap = spectral_gap(fam.measure, fam.weight, grid);
    ev.bounds = radial_bound_records(fam);
    const double tol = 1e-6 * (1.0 + ev.gap.value);
    ev.worst_lower_slack = kInf;
    ev.worst_upper_slack = kInf;
    for (const auto& r : ev.bounds) {
        if (!std::isfinite(r.value)) continue;
        if (r.section == "radial-lower") ev.worst_lower_slack = std::min(ev.worst_lower_slack, ev.gap.value + tol - r.value);
        if (r.section == "radial-upper") ev.worst_upper_slack = std::min(ev.worst_upper_slack, r.value - ev.gap.value + tol);
    }
    return ev;
}

RunReport cmd_bounds(const Options& opts) {
    RunReport rep;
    rep.command = "bounds";
    rep.inputs = echo(opts);
    const Family fam = make_family(opts.spec, opts.tail_tol);
    rep.records = radial_bound_records(fam);
    const int n = opts.spec.n;

    if (log_concave_unit(fam)) {
        try {
            rep.records.push_back(bracket_record("full", "main-theorem", main_theorem_bracket(n, moment(fam.measure, 2))));
        } catch (const NonIntegrable&) {
            rep.warn("second moment is not finite; main-theorem bracket omitted");
        }
    }
    const double lo = std::max(0.0, best_of(rep.records, "radial-lower", true));
    const double hi = best_of(rep.records, "radial-upper", false);
    if (auto r = comparison_record(fam, lo, std::isfinite(hi) ? hi : kInf,
                                   fam.weight.is_unit() ? "radial-spherical-min" : "weighted-radial-spherical-min"))
        rep.records.push_back(*r);
    if (opts.spec.family == FamilyKind::exponential_power) {
        const auto b = exp_power_explicit(n, opts.spec.alpha);
        rep.records.push_back(bracket_record("full", "exp-power-exact", b.exact));
        rep.records.push_back(bracket_record("full", "exp-power-simplified", b.simplified));
    }
    rep.records.push_back(reference_record(opts.spec, Scope::radial));
    rep.records.push_back(reference_record(opts.spec, Scope::full));
    return rep;
}

RunReport cmd_eigen(const Options& opts) {
    RunReport rep;
    rep.command = "eigen";
    rep.inputs = echo(opts);
    const Family fam = make_family(opts.spec, opts.tail_tol);
    const GapEstimate g = spectral_gap(fam.measure, fam.weight, opts.grid());
    Record gap = make_record("solver", "radial-gap", g.value, "finite-volume-richardson");
    gap.error = g.error_estimate;
    gap.lower = g.value - g.error_estimate;
    gap.upper = g.value + g.error_estimate;
    rep.records.push_back(gap);
    rep.records.push_back(make_record("solver", "gap-coarse-mesh", g.coarse_value));
    rep.records.push_back(make_record("solver", "gap-fine-mesh", g.fine_value));
    rep.records.push_back(make_record("solver", "r-max-used", g.r_max_used));
    rep.records.push_back(make_record("solver", "log-r-max-used", g.log_r_max_used));
    rep.records.push_back(make_record("solver", "cells-used", g.n_cells_used));
    rep.records.push_back(make_record("solver", "windows", g.windows));
    if (auto r = comparison_record(fam, g.value, g.value, "comparison-from-solver")) rep.records.push_back(*r);
    rep.records.push_back(reference_record(opts.spec, Scope::radial));
    rep.records.push_back(reference_record(opts.spec, Scope::full));
    for (const auto& w : g.warnings) rep.warn(w);
    return rep;
}

RunReport cmd_sample(const Options& opts) {
    RunReport rep;
    rep.command = "sample";
    rep.inputs = echo(opts);
    rep.inputs["count"] = opts.count;
    rep.inputs["function"] = opts.function;
    const Family fam = make_family(opts.spec, opts.tail_tol);

    FieldFunction field;
    std::optional<CandidateFunction> radial;
    if (opts.function == "linear") {
        field = linear_field();
    } else if (opts.function == "radial-quadratic") {
        field = radial_quadratic_field(0.0);
        radial = power_candidate(2.0);
    } else if (opts.function == "designated") {
        field = radial_field(fam.candidate);
        radial = fam.candidate;
    } else {
        throw InvalidInput("unknown function '" + opts.function + "'");
    }

    const SampleBatch batch = sample_mu(fam.measure, opts.count, opts.seed);
    const RayleighResult res = rayleigh_estimate(batch, field, fam.weight);
    Record est = make_record("sample", "rayleigh-estimate", res.ratio, "batch-means-16");
    est.error = res.ci_half_width;
    est.lower = res.ratio - res.ci_half_width;
    est.upper = res.ratio + res.ci_half_width;
    rep.records.push_back(est);

    double sum = 0.0, sum2 = 0.0;
    for (double r : batch.radius) {
        sum += r * r;
        sum2 += r * r * r * r;
    }
    const double cnt = static_cast<double>(batch.count);
    const double mean = sum / cnt;
    Record m2 = make_record("sample", "empirical-second-moment", mean, "sample-mean");
    m2.error = std::sqrt(std::max(0.0, sum2 / cnt - mean * mean) / cnt);
    rep.records.push_back(m2);

    double oracle = kNaN;
    try {
        if (radial) {
            oracle = rayleigh_upper(fam.measure, fam.weight, *radial);
        } else {
            const double ms = fam.weight.is_unit() ? 1.0 : weighted_moment(fam.measure, fam.weight, WeightedMomentKind::s2);
            oracle = opts.spec.n * ms / moment(fam.measure, 2);
        }
    } catch (const NonIntegrable&) {
        rep.warn("quadrature oracle is not finite for this function");
    }
    if (std::isfinite(oracle)) {
        const bool inside = std::abs(oracle - res.ratio) <= res.ci_half_width;
        rep.records.push_back(make_record("sample", "quadrature-oracle", oracle, source::rayleigh_quotient,
                                          inside ? "within-ci" : "outside-ci"));
    }
    return rep;
}

namespace {

void gamma_checks(RunReport& rep, int& failures) {
    for (double a : {0.25, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0}) {
        for (int k = 0; k <= 8; ++k) {
            const double b = 0.25 * k;
            std::vector<GammaBranch> branches;
            if (b <= 1.0) branches.push_back(GammaBranch::first);
            if (b >= 1.0) branches.push_back(GammaBranch::second);
            for (GammaBranch br : branches) {
                Record r = make_record("check", "gamma a=" + fmt("%g", a) + " b=" + fmt("%g", b) +
                                                    (br == GammaBranch::first ? " first" : " second"),
                                       kNaN, source::gamma_log_convexity);
                try {
                    const auto g = gamma_ratio_bounds(a, b, br);
                    r.value = std::min(g.value - g.lower, g.upper - g.value);
                    r.lower = g.lower;
                    r.upper = g.upper;
                    r.status = r.value >= -1e-12 * std::max(1.0, g.value) ? "pass" : "fail";
                } catch (const Error&) {
                    r.status = "fail";
                }
                if (r.status == "fail") ++failures;
                rep.records.push_back(std::move(r));
            }
        }
    }
    // log-Gamma against sums of logarithms at integers and half-integers
    double log_fact = 0.0;
    for (int k = 1; k <= 170; ++k) {
        const double ref = log_fact;  // log (k-1)!
        const double got = log_gamma(k);
        const double err = std::abs(got - ref) / std::max(1.0, std::abs(ref));
        Record r = make_record("check", "log-gamma " + std::to_string(k), err, "factorial");
        r.status = err <= 1e-13 ? "pass" : "fail";
        if (r.status == "fail") ++failures;
        rep.records.push_back(std::move(r));
        log_fact += std::log(static_cast<double>(k));
    }
    for (int k = 0; k <= 80; ++k) {
        // Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!)
        double ref = 0.5 * std::log(M_PI) - k * std::log(4.0);
        for (int j = k + 1; j <= 2 * k; ++j) ref += std::log(static_cast<double>(j));
        const double got = log_gamma(k + 0.5);
        const double err = std::abs(got - ref) / std::max(1.0, std::abs(ref));
        Record r = make_record("check", "log-gamma " + std::to_string(k) + ".5", err, "half-integer");
        r.status = err <= 1e-13 ? "pass" : "fail";
        if (r.status == "fail") ++failures;
        rep.records.push_back(std::move(r));
    }
}

void solver_reference_checks(RunReport& rep, int& failures, const std::vector<FamilySpec>& specs,
                             const Options& opts, const std::string& tag) {
    std::vector<GapEstimate> gaps(specs.size());
    parallel_for(specs.size(), [&](std::size_t i) {
        const Family fam = make_family(specs[i], opts.tail_tol);
        gaps[i] = spectral_gap(fam.measure, fam.weight, opts.grid());
    });
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const ReferenceGap ref = reference_gap(specs[i], Scope::radial);
        Record r = make_record("check", tag + " " + specs[i].label(), gaps[i].value, ref.source);
        r.error = gaps[i].error_estimate;
        r.lower = ref.value;
        r.upper = relative_error(gaps[i].value, ref.value);
        r.status = r.upper <= 1e-3 ? "pass" : "fail";
        if (r.status == "fail") ++failures;
        rep.records.push_back(std::move(r));
    }
}

std::vector<FamilySpec> cauchy_exact_cases() {
    std::vector<FamilySpec> out;
    const std::vector<std::pair<int, std::vector<double>>> table = {
        {2, {1.5, 2.0, 3.0, 4.0, 6.0}},
        {3, {1.6, 2.5, 3.5, 4.0, 6.0}},
        {4, {2.5, 3.0, 4.0, 5.0, 7.0}},
        {6, {3.5, 4.0, 5.0, 6.0, 8.0}},
    };
    for (const auto& [n, betas] : table)
        for (double beta : betas) out.push_back({FamilyKind::generalized_cauchy, n, 2.0, beta, WeightChoice::one_plus_r2});
    return out;
}

void gaussian_checks(RunReport& rep, int& failures, const Options& opts) {
    std::vector<FamilySpec> specs;
    for (int n = 2; n <= 8; ++n) specs.push_back({FamilyKind::gaussian, n, 2.0, 0.0, WeightChoice::unit});
    std::vector<GapEstimate> gaps(specs.size());
    std::vector<double> residual(specs.size());
    parallel_for(specs.size(), [&](std::size_t i) {
        const Family fam = make_family(specs[i], opts.tail_tol);
        gaps[i] = spectral_gap(fam.measure, fam.weight, opts.grid());
        residual[i] = residual_check(fam.measure, fam.weight, shifted(power_candidate(2.0), specs[i].n), 2.0);
    });
    for (std::size_t i = 0; i < specs.size(); ++i) {
        Record g = make_record("check", "gaussian-gap " + specs[i].label(), gaps[i].value, "eigenpair r^2-n");
        g.error = gaps[i].error_estimate;
        g.lower = 1.998;
        g.upper = 2.002;
        g.status = std::abs(gaps[i].value - 2.0) <= 2e-3 ? "pass" : "fail";
        Record res = make_record("check", "gaussian-residual " + specs[i].label(), residual[i], "eigenpair r^2-n");
        res.upper = 1e-10;
        res.status = residual[i] <= 1e-10 ? "pass" : "fail";
        failures += (g.status == "fail") + (res.status == "fail");
        rep.records.push_back(std::move(g));
        rep.records.push_back(std::move(res));
    }
}

void bracketing_checks(RunReport& rep, int& failures, const Options& opts) {
    const auto specs = catalog_grid();
    std::vector<CaseEvaluation> evs(specs.size());
    std::vector<std::string> errors(specs.size());
    parallel_for(specs.size(), [&](std::size_t i) {
        try {
            evs[i] = evaluate_case(specs[i], opts.grid(), opts.tail_tol);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < specs.size(); ++i) {
        Record r = make_record("check", "bracketing " + specs[i].label(), kNaN, "lower<=solver<=upper");
        if (!errors[i].empty()) {
            r.status = "fail";
            r.source = errors[i];
        } else {
            const auto& ev = evs[i];
            r.value = ev.gap.value;
            r.error = ev.gap.error_estimate;
            r.lower = best_of(ev.bounds, "radial-lower", true);
            r.upper = best_of(ev.bounds, "radial-upper", false);
            r.status = ev.worst_lower_slack >= 0.0 && ev.worst_upper_slack >= 0.0 ? "pass" : "fail";
        }
        if (r.status == "fail") ++failures;
        rep.records.push_back(std::move(r));
    }
}

void reference_checks(RunReport& rep, int& failures, const Options& opts) {
    std::vector<FamilySpec> exact;
    for (const auto& s : catalog_grid())
        if (reference_gap(s, Scope::radial).kind == ReferenceKind::exact) exact.push_back(s);
    solver_reference_checks(rep, failures, exact, opts, "reference-exact");

    // adjacent branches agree at every threshold of the Cauchy reference table
    auto endpoints_match = [&](const std::string& name, int n, double beta, Scope scope) {
        const FamilySpec at{FamilyKind::generalized_cauchy, n, 2.0, beta, WeightChoice::one_plus_r2};
        FamilySpec above = at;
        above.beta = beta * (1.0 + 1e-12);
        const auto a = reference_gap(at, scope);
        const auto b = reference_gap(above, scope);
        const double d = std::max(std::abs(a.lower - b.lower), std::abs(a.upper - b.upper));
        Record r = make_record("check", name, d, a.source + "|" + b.source);
        r.status = d <= 1e-9 * (1.0 + std::abs(a.upper)) ? "pass" : "fail";
        if (r.status == "fail") ++failures;
        rep.records.push_back(std::move(r));
    };
    for (int n : {3, 4, 5, 6, 8}) {
        endpoints_match("continuity radial n=" + std::to_string(n) + " beta=n/2+2", n, 0.5 * n + 2.0, Scope::radial);
        endpoints_match("continuity full n=" + std::to_string(n) + " beta=n/2+2", n, 0.5 * n + 2.0, Scope::full);
        endpoints_match("continuity full n=" + std::to_string(n) + " beta=n(n+2)/(n+1)", n,
                        static_cast<double>(n) * (n + 2) / (n + 1), Scope::full);
        endpoints_match("continuity full n=" + std::to_string(n) + " beta=n+1", n, n + 1.0, Scope::full);
    }
    endpoints_match("continuity full n=2 beta=(3+sqrt5)/2", 2, 0.5 * (3.0 + std::sqrt(5.0)), Scope::full);
    endpoints_match("continuity full n=2 beta=3", 2, 3.0, Scope::full);
    endpoints_match("continuity radial n=2 beta=3", 2, 3.0, Scope::radial);
}

}  // namespace

RunReport cmd_verify(const Options& opts) {
    static const std::vector<std::string> scopes = {"gamma-inequalities", "cauchy-exact", "gaussian", "bracketing",
                                                    "references", "all"};
    if (std::find(scopes.begin(), scopes.end(), opts.scope) == scopes.end())
        throw InvalidInput("unknown verify scope '" + opts.scope + "'");
    RunReport rep;
    rep.command = "verify";
    rep.inputs = echo(opts, false);
    rep.inputs["scope"] = opts.scope;
    int failures = 0;
    const bool all = opts.scope == "all";
    if (all || opts.scope == "gamma-inequalities") gamma_checks(rep, failures);
    if (all || opts.scope == "cauchy-exact") solver_reference_checks(rep, failures, cauchy_exact_cases(), opts, "cauchy-exact");
    if (all || opts.scope == "gaussian") gaussian_checks(rep, failures, opts);
    if (all || opts.scope == "bracketing") bracketing_checks(rep, failures, opts);
    if (all || opts.scope == "references") reference_checks(rep, failures, opts);
    if (failures > 0) rep.fail(std::to_string(failures) + " check(s) failed");
    return rep;
}

namespace {

Table exp_power_table(const Options& opts) {
    Table t;
    t.id = "exp-power-asymptotics";
    t.columns = {"n", "alpha", "lower", "upper", "simplified_lower", "simplified_upper", "solver_radial",
                 "comparison_lower", "comparison_upper", "n_pow_1_minus_2_over_alpha"};
    const std::vector<int> dims = opts.dims.empty() ? std::vector<int>{2, 4, 8, 16, 32} : opts.dims;
    std::vector<std::pair<double, int>> cases;
    for (double a : opts.alphas)
        for (int n : dims) cases.emplace_back(a, n);
    t.rows.resize(cases.size());
    parallel_for(cases.size(), [&](std::size_t i) {
        const auto [alpha, n] = cases[i];
        const FamilySpec spec{FamilyKind::exponential_power, n, alpha, 0.0, WeightChoice::unit};
        const Family fam = make_family(spec, opts.tail_tol);
        const auto b = exp_power_explicit(n, alpha);
        const double gap = spectral_gap(fam.measure, fam.weight, opts.grid()).value;
        const auto cmp = spectral_comparison(gap, n, b.m2);
        t.rows[i] = {static_cast<double>(n), alpha, b.exact.lower, b.exact.upper, b.simplified.lower,
                     b.simplified.upper, gap, cmp.lower, cmp.upper, std::pow(static_cast<double>(n), 1.0 - 2.0 / alpha)};
    });
    return t;
}

Table cauchy_table(const Options& opts, int n) {
    Table t;
    t.id = "cauchy-n" + std::to_string(n);
    t.columns = {"n", "beta", "radial_reference", "solver_radial", "solver_error", "full_kind", "full_lower",
                 "full_upper", "full_source"};
    const std::vector<double> betas = n == 2 ? std::vector<double>{1.25, 1.5, 2.0, 2.5, 2.75, 3.0, 3.5, 4.0, 5.0, 6.0}
                                             : std::vector<double>{1.6, 2.0, 2.5, 3.0, 3.5, 3.75, 4.0, 4.5, 5.0, 6.0, 8.0};
    t.rows.resize(betas.size());
    parallel_for(betas.size(), [&](std::size_t i) {
        const FamilySpec spec{FamilyKind::generalized_cauchy, n, 2.0, betas[i], WeightChoice::one_plus_r2};
        const Family fam = make_family(spec, opts.tail_tol);
        const auto g = spectral_gap(fam.measure, fam.weight, opts.grid());
        const auto rad = reference_gap(spec, Scope::radial);
        const auto full = reference_gap(spec, Scope::full);
        t.rows[i] = {static_cast<double>(n), betas[i], rad.value, g.value, g.error_estimate,
                     std::string(to_string(full.kind)), full.lower, full.upper, full.source};
    });
    return t;
}

Table gaussian_weighted_table(const Options& opts) {
    Table t;
    t.id = "gaussian-weighted";
    t.columns = {"weight", "n", "full_lower", "full_upper", "radial_reference_lower", "bj_weighted_lower",
                 "comparison_lower_term", "comparison_upper_term", "solver_radial"};
    const std::vector<int> dims = opts.dims.empty() ? std::vector<int>{2, 3, 4, 5, 6, 7, 8} : opts.dims;
    std::vector<FamilySpec> specs;
    for (auto w : {WeightChoice::one_plus_r2, WeightChoice::inv_one_plus_r2})
        for (int n : dims) specs.push_back({FamilyKind::gaussian, n, 2.0, 0.0, w});
    t.rows.resize(specs.size());
    parallel_for(specs.size(), [&](std::size_t i) {
        const auto& spec = specs[i];
        const Family fam = make_family(spec, opts.tail_tol);
        const auto full = reference_gap(spec, Scope::full);
        const auto rad = reference_gap(spec, Scope::radial);
        double bj = kNaN;
        try {
            bj = bj_weighted_lower(fam.measure, fam.weight).value;
        } catch (const HypothesisFailed&) {
        }
        const double mr = weighted_moment(fam.measure, fam.weight, WeightedMomentKind::r2_over_s2);
        const double ms = weighted_moment(fam.measure, fam.weight, WeightedMomentKind::s2);
        const double m2 = moment(fam.measure, 2);
        const double gap = spectral_gap(fam.measure, fam.weight, opts.grid()).value;
        t.rows[i] = {std::string(to_string(spec.weight)), static_cast<double>(spec.n), full.lower, full.upper,
                     rad.lower, bj, (spec.n - 1) / mr, spec.n * ms / m2, gap};
    });
    return t;
}

Table ball_table(const Options& opts) {
    Table t;
    t.id = "ball";
    t.columns = {"n", "full_lower", "full_upper", "radial_lower", "solver_radial", "solver_error"};
    const std::vector<int> dims = opts.dims.empty() ? std::vector<int>{2, 4, 8, 16, 32} : opts.dims;
    t.rows.resize(dims.size());
    parallel_for(dims.size(), [&](std::size_t i) {
        const FamilySpec spec{FamilyKind::uniform_ball, dims[i], 2.0, 0.0, WeightChoice::unit};
        const Family fam = make_family(spec, opts.tail_tol);
        const auto g = spectral_gap(fam.measure, fam.weight, opts.grid());
        const auto full = reference_gap(spec, Scope::full);
        const auto rad = reference_gap(spec, Scope::radial);
        t.rows[i] = {static_cast<double>(dims[i]), full.lower, full.upper, rad.lower, g.value, g.error_estimate};
    });
    return t;
}

}  // namespace

RunReport cmd_table(const Options& opts) {
    RunReport rep;
    rep.command = "table";
    rep.inputs = echo(opts, false);
    rep.inputs["id"] = opts.table_id;
    rep.inputs["alphas"] = opts.alphas;
    rep.inputs["dims"] = opts.dims;
    if (opts.table_id == "exp-power-asymptotics")
        rep.table = exp_power_table(opts);
    else if (opts.table_id == "cauchy-n3")
        rep.table = cauchy_table(opts, 3);
    else if (opts.table_id == "cauchy-n2")
        rep.table = cauchy_table(opts, 2);
    else if (opts.table_id == "gaussian-weighted")
        rep.table = gaussian_weighted_table(opts);
    else if (opts.table_id == "ball")
        rep.table = ball_table(opts);
    else
        throw InvalidInput("unknown table id '" + opts.table_id + "'");
    return rep;
}

std::vector<int> parse_dims(const std::string& text) {
    std::vector<int> out;
    try {
        const auto dots = text.find("..");
        if (dots != std::string::npos) {
            const int a = std::stoi(text.substr(0, dots));
            const int b = std::stoi(text.substr(dots + 2));
            if (a > b) throw InvalidInput("empty dimension range");
            for (int n = a; n <= b; ++n) out.push_back(n);
        } else {
            for (const auto& part : parse_list(text)) {
                if (part != std::floor(part)) throw InvalidInput("dimensions must be integers");
                out.push_back(static_cast<int>(part));
            }
        }
    } catch (const std::logic_error&) {
        throw InvalidInput("cannot parse dimensions '" + text + "'");
    }
    for (int n : out)
        if (n < 2) throw InvalidInput("dimensions must be >= 2");
    return out;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(item, &used);
        } catch (const std::logic_error&) {
            throw InvalidInput("cannot parse number '" + item + "'");
        }
        if (used != item.size()) throw InvalidInput("cannot parse number '" + item + "'");
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral gaps of spherically symmetric measures"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    Options opts;
    std::string family = "gaussian", weight = "unit", grading = "logarithmic", dims, alphas;
    opts.spec.beta = std::numeric_limits<double>::quiet_NaN();

    auto common = [&](CLI::App* sub) {
        sub->add_option("--family", family, "exp-power | ball | cauchy | gaussian")->capture_default_str();
        sub->add_option("--dim", opts.spec.n, "dimension n >= 2")->capture_default_str();
        sub->add_option("--alpha", opts.spec.alpha, "exp-power exponent (>= 1)")->capture_default_str();
        sub->add_option("--beta", opts.spec.beta, "cauchy exponent (> n/2)");
        sub->add_option("--weight", weight, "unit | one-plus-r2 | inv-one-plus-r2")->capture_default_str();
        sub->add_option("--format", opts.format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
        sub->add_option("--seed", opts.seed, "random seed")->capture_default_str();
        sub->add_option("--tail-tol", opts.tail_tol, "radial tail mass cut")->capture_default_str();
        sub->add_option("--cells", opts.cells, "solver cells (64 * 2^k)")->capture_default_str();
        sub->add_option("--grading", grading, "logarithmic | uniform")
            ->check(CLI::IsMember({"logarithmic", "uniform"}))
            ->capture_default_str();
    };
    auto* bounds = app.add_subcommand("bounds", "closed-form and quadrature bounds");
    auto* eigen = app.add_subcommand("eigen", "radial spectral gap by the Sturm-Liouville solver");
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    auto* table = app.add_subcommand("table", "reproduce a results table");
    auto* sample = app.add_subcommand("sample", "Monte Carlo Rayleigh quotient");
    for (auto* s : {bounds, eigen, verify, table, sample}) common(s);
    verify->add_option("--scope", opts.scope, "gamma-inequalities | cauchy-exact | gaussian | bracketing | references | all")
        ->capture_default_str();
    table->add_option("--id", opts.table_id, "exp-power-asymptotics | cauchy-n3 | cauchy-n2 | gaussian-weighted | ball")
        ->required();
    table->add_option("--alphas", alphas, "comma-separated exponents");
    table->add_option("--dims", dims, "range a..b or comma-separated list");
    sample->add_option("--count", opts.count, "number of samples")->capture_default_str();
    sample->add_option("--function", opts.function, "linear | radial-quadratic | designated")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    RunReport rep;
    int code = 0;
    const std::string name = app.get_subcommands().front()->get_name();
    rep.command = name;
    try {
        opts.spec.family = parse_family(family);
        opts.spec.weight = parse_weight(weight);
        opts.grading = grading == "uniform" ? Grading::uniform : Grading::logarithmic;
        if (!dims.empty()) opts.dims = parse_dims(dims);
        if (!alphas.empty()) opts.alphas = parse_list(alphas);
        opts.grid().validate();
        if (!(opts.tail_tol > 0.0 && opts.tail_tol < 1e-3)) throw InvalidInput("--tail-tol must lie in (0, 1e-3)");
        if (name == "bounds") rep = cmd_bounds(opts);
        else if (name == "eigen") rep = cmd_eigen(opts);
        else if (name == "verify") rep = cmd_verify(opts);
        else if (name == "table") rep = cmd_table(opts);
        else rep = cmd_sample(opts);
        if (rep.status == "error") code = 1;
    } catch (const InvalidInput& e) {
        rep.fail(e.what());
        code = 2;
    } catch (const std::exception& e) {
        rep.fail(e.what());
        code = 1;
    }
    out << (opts.format == "csv" ? to_csv(rep) : to_json_text(rep));
    if (!rep.error.empty()) err << "error: " << rep.error << "\n";
    return code;
}

}  // namespace specgap::cli
