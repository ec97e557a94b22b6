// One PASS/FAIL line per acceptance criterion; exit status 1 if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "oracle_values.hpp"
#include "specgap/bounds.hpp"
#include "specgap/catalog.hpp"
#include "specgap/eigensolver.hpp"
#include "specgap/errors.hpp"
#include "specgap/parallel.hpp"
#include "specgap/sampler.hpp"
#include "specgap/special_functions.hpp"

using namespace specgap;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Collects the sub-checks of one criterion; failing sub-checks are printed as detail lines.
struct Criterion {
    int id;
    std::string title;
    int checks = 0;
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        ++checks;
        if (!ok) failures.push_back(what);
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

std::string spec_label(const FamilySpec& s) { return s.label(); }

GapEstimate solve(const FamilySpec& spec) {
    const auto f = make_family(spec);
    return spectral_gap(f.measure, f.weight);
}

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t m = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void cauchy_exact(Criterion& c) {
    const std::vector<std::pair<int, std::vector<double>>> cases = {
        {2, {1.5, 2.0, 2.5, 3.0, 4.0, 6.0}},
        {3, {1.6, 2.5, 3.5, 4.0, 6.0}},
        {4, {2.5, 3.0, 4.0, 5.0, 6.0}},
        {6, {3.5, 4.0, 5.0, 6.0, 8.0}},
    };
    for (const auto& [n, betas] : cases) {
        for (double beta : betas) {
            const FamilySpec spec{FamilyKind::generalized_cauchy, n, 2.0, beta, WeightChoice::one_plus_r2};
            const auto t0 = Clock::now();
            const auto g = solve(spec);
            const double dt = seconds_since(t0);
            const double h = 0.5 * n;
            const double expect = beta <= h + 2.0 ? (beta - h) * (beta - h) : 4.0 * (beta - h - 1.0);
            c.check(rel(g.value, expect) <= 1e-3,
                    spec.label() + fmt(": solver %.10g vs %.10g", g.value, expect));
            c.check(dt <= 10.0, spec.label() + fmt(": %.2f s", dt));
        }
        // both branches give 4 at the threshold; the solver must be continuous across it
        const double b = 0.5 * n + 2.0;
        const double below = solve({FamilyKind::generalized_cauchy, n, 2.0, b - 1e-6, WeightChoice::one_plus_r2}).value;
        const double above = solve({FamilyKind::generalized_cauchy, n, 2.0, b + 1e-6, WeightChoice::one_plus_r2}).value;
        c.check(rel(below, 4.0) <= 1e-3 && rel(above, 4.0) <= 1e-3 && rel(below, above) <= 1e-3,
                fmt("n=%g threshold: %.10g / %.10g", n, below, above));
    }
}

void gaussian_radial(Criterion& c) {
    for (int n = 2; n <= 8; ++n) {
        const FamilySpec spec{FamilyKind::gaussian, n, 2.0, 0.0, WeightChoice::unit};
        const auto fam = make_family(spec);
        const auto g = spectral_gap(fam.measure, fam.weight);
        c.check(std::abs(g.value - 2.0) <= 0.002, spec.label() + fmt(": %.10g", g.value));
        auto f = power_candidate(2.0);
        const auto r2 = f.f;
        f.f = [r2, n](double r) { return r2(r) - n; };
        const double res = residual_check(fam.measure, fam.weight, f, 2.0);
        c.check(res <= 1e-10, spec.label() + fmt(": residual %.3g", res));
    }
}

void exp_power_brackets(Criterion& c) {
    const double tol = 1e-12;
    for (double alpha : {1.0, 1.5, 2.0, 4.0}) {
        for (int n = 2; n <= 8; ++n) {
            const FamilySpec spec{FamilyKind::exponential_power, n, alpha, 0.0, WeightChoice::unit};
            const auto b = exp_power_explicit(n, alpha);
            const double gap = solve(spec).value;
            const auto cmp = spectral_comparison(gap, n, b.m2);
            auto inside = [&](double x, const BoundBracket& br) {
                return x >= br.lower * (1 - tol) && x <= br.upper * (1 + tol);
            };
            c.check(inside(cmp.lower, b.exact) && inside(cmp.upper, b.exact),
                    spec.label() + fmt(": comparison [%.10g, %.10g] vs [%.10g, %.10g]", cmp.lower, cmp.upper,
                                       b.exact.lower, b.exact.upper));
            if (alpha == 2.0)
                c.check(inside(1.0, b.exact), spec.label() + fmt(": 1 not in [%.10g, %.10g]", b.exact.lower, b.exact.upper));
            c.check(b.simplified.lower <= b.exact.lower * (1 + tol) && b.exact.upper <= b.simplified.upper * (1 + tol),
                    spec.label() + fmt(": simplified [%.10g, %.10g] vs [%.10g, %.10g]", b.simplified.lower,
                                       b.simplified.upper, b.exact.lower, b.exact.upper));
        }
    }
}

void ball(Criterion& c) {
    for (int n : {2, 4, 8, 16}) {
        const double g = solve({FamilyKind::uniform_ball, n, 2.0, 0.0, WeightChoice::unit}).value;
        c.check(g >= (n * n - 1) / 4.0, fmt("n=%g: %.10g < (n^2-1)/4", n, g));
    }
    std::vector<double> ns{4, 8, 16, 32}, gaps;
    for (double n : ns) gaps.push_back(solve({FamilyKind::uniform_ball, static_cast<int>(n), 2.0, 0.0, WeightChoice::unit}).value);
    const double slope = loglog_slope(ns, gaps);
    c.note(fmt("log-log slope %.4f (target 2 +- 0.15)", slope));
    c.check(std::abs(slope - 2.0) <= 0.15, fmt("slope %.4f outside 2 +- 0.15", slope));

    cli::Options opts;
    opts.table_id = "ball";
    const auto rep = cli::cmd_table(opts);
    const auto& t = *rep.table;
    const auto col = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(t.columns.begin(), t.columns.end(), name) - t.columns.begin());
    };
    c.check(!t.rows.empty() && col("full_lower") < t.columns.size() && col("full_upper") < t.columns.size(),
            "table ball lacks the full bracket");
    for (const auto& row : t.rows) {
        const double n = std::get<double>(row[col("n")]);
        const double lo = std::get<double>(row[col("full_lower")]);
        const double hi = std::get<double>(row[col("full_upper")]);
        c.check(lo <= hi && rel(lo, (n - 1) * (n + 2) / n) <= 1e-15 && rel(hi, n + 2) <= 1e-15,
                fmt("table row n=%g: [%.10g, %.10g]", n, lo, hi));
    }
}

void exp_power_slopes(Criterion& c) {
    std::vector<double> ns{4, 8, 16, 32};
    for (double alpha : {1.0, 2.0, 4.0}) {
        std::vector<double> gaps;
        for (double n : ns)
            gaps.push_back(solve({FamilyKind::exponential_power, static_cast<int>(n), alpha, 0.0, WeightChoice::unit}).value);
        const double slope = loglog_slope(ns, gaps);
        const double target = 1.0 - 2.0 / alpha;
        c.note(fmt("alpha=%g: slope %.4f (target %.4f +- 0.15)", alpha, slope, target));
        c.check(std::abs(slope - target) <= 0.15, fmt("alpha=%g: slope %.4f vs %.4f", alpha, slope, target));
    }
}

void soundness_sweep(Criterion& c) {
    const auto grid = catalog_grid();
    c.check(grid.size() >= 60, fmt("catalog has %g cases", static_cast<double>(grid.size())));
    std::vector<cli::CaseEvaluation> evs(grid.size());
    std::vector<std::string> errors(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        try {
            evs[i] = cli::evaluate_case(grid[i], GridSpec{}, 1e-12);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!errors[i].empty()) {
            c.check(false, grid[i].label() + ": " + errors[i]);
            continue;
        }
        const auto& ev = evs[i];
        int lowers = 0;
        for (const auto& r : ev.bounds)
            if (r.section == "radial-lower" && std::isfinite(r.value)) ++lowers;
        c.check(lowers > 0, grid[i].label() + ": no lower bound evaluated");
        c.check(ev.worst_lower_slack >= 0.0, grid[i].label() + fmt(": lower slack %.3g", ev.worst_lower_slack));
        c.check(ev.worst_upper_slack >= 0.0, grid[i].label() + fmt(": upper slack %.3g", ev.worst_upper_slack));
    }
}

void weighted_gaussian(Criterion& c) {
    for (int n = 2; n <= 8; ++n) {
        const FamilySpec spec{FamilyKind::gaussian, n, 2.0, 0.0, WeightChoice::one_plus_r2};
        const auto fam = make_family(spec);
        const double bj = bj_weighted_lower(fam.measure, fam.weight).value;
        const double claim = n == 2 ? 4.0 : 4.0 * (n - 2);
        c.check(bj >= claim, spec.label() + fmt(": bj_weighted %.10g < %.10g", bj, claim));

        const double mr = weighted_moment(fam.measure, fam.weight, WeightedMomentKind::r2_over_s2);
        const double term = (n - 1) / mr;
        const double oracle = oracle::kGaussianWeightedComparisonLower[n - 2].value;
        c.check(rel(term, oracle) <= 1e-8, spec.label() + fmt(": comparison term %.15g vs %.15g", term, oracle));

        for (auto w : {WeightChoice::one_plus_r2, WeightChoice::inv_one_plus_r2}) {
            const auto ref = reference_gap({FamilyKind::gaussian, n, 2.0, 0.0, w}, Scope::full);
            c.check(ref.kind == ReferenceKind::bracket && ref.lower <= ref.upper,
                    std::string(to_string(w)) + fmt(" n=%g: [%.10g, %.10g]", n, ref.lower, ref.upper));
        }
    }
    cli::Options opts;
    opts.table_id = "gaussian-weighted";
    const auto rep = cli::cmd_table(opts);
    c.check(rep.table && rep.table->rows.size() == 14, "gaussian-weighted table does not list both weights");
}

void gamma_inequalities(Criterion& c) {
    double worst = std::numeric_limits<double>::infinity();
    for (double a : {0.25, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0}) {
        for (int k = 0; k <= 8; ++k) {
            const double b = 0.25 * k;
            const auto g = gamma_ratio_bounds(a, b);
            const double slack = std::min(g.value - g.lower, g.upper - g.value);
            worst = std::min(worst, slack);
            c.check(slack >= -1e-12, fmt("a=%g b=%g: slack %.3g", a, b, slack));
        }
    }
    c.note(fmt("worst gamma slack %.3g", worst));
    double worst_rel = 0.0;
    double log_fact = 0.0;  // log((k-1)!)
    for (int k = 1; k <= 170; ++k) {
        if (k > 1) log_fact += std::log(static_cast<double>(k - 1));
        if (log_fact != 0.0) worst_rel = std::max(worst_rel, rel(log_gamma(k), log_fact));
        else worst_rel = std::max(worst_rel, std::abs(log_gamma(k)));
    }
    // Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!)
    for (int k = 0; k <= 100; ++k) {
        double v = 0.5 * std::log(std::numbers::pi);
        for (int j = 1; j <= k; ++j) v += std::log(j - 0.5);
        const double got = log_gamma(k + 0.5);
        worst_rel = std::max(worst_rel, std::abs(got - v) / std::max(std::abs(v), 1e-300));
    }
    c.note(fmt("worst log-gamma relative error %.3g", worst_rel));
    c.check(worst_rel <= 1e-13, fmt("log-gamma relative error %.3g", worst_rel));
}

void monte_carlo(Criterion& c) {
    {
        const auto fam = make_family({FamilyKind::gaussian, 3, 2.0, 0.0, WeightChoice::unit});
        const auto t0 = Clock::now();
        const auto r = rayleigh_estimate(sample_mu(fam.measure, 100000, 7), linear_field(), fam.weight);
        const double dt = seconds_since(t0);
        c.note(fmt("gaussian linear: %.6f +- %.6f (%.2f s)", r.ratio, r.ci_half_width, dt));
        c.check(std::abs(r.ratio - 1.0) <= r.ci_half_width, fmt("gaussian linear %.6f +- %.6f", r.ratio, r.ci_half_width));
        c.check(dt <= 5.0, fmt("gaussian estimate took %.2f s", dt));
    }
    {
        const auto fam = make_family({FamilyKind::generalized_cauchy, 3, 2.0, 4.0, WeightChoice::one_plus_r2});
        const auto t0 = Clock::now();
        const auto r = rayleigh_estimate(sample_mu(fam.measure, 100000, 7), radial_quadratic_field(), fam.weight);
        const double dt = seconds_since(t0);
        // r^2 - 1 is the eigenfunction; its eigenvalue is 4(beta - n/2 - 1) = 6
        c.note(fmt("cauchy radial-quadratic: %.6f +- %.6f (%.2f s)", r.ratio, r.ci_half_width, dt));
        c.check(std::abs(r.ratio - 6.0) <= r.ci_half_width,
                fmt("cauchy radial-quadratic %.6f +- %.6f vs 6", r.ratio, r.ci_half_width));
        c.check(dt <= 5.0, fmt("cauchy estimate took %.2f s", dt));
    }
    for (const auto& args : std::vector<std::vector<const char*>>{
             {"specgap", "sample", "--family", "gaussian", "--dim", "3", "--count", "100000", "--seed", "7",
              "--function", "linear"},
             {"specgap", "sample", "--family", "cauchy", "--beta", "4", "--dim", "3", "--weight", "one-plus-r2",
              "--count", "100000", "--seed", "7", "--function", "radial-quadratic"}}) {
        std::ostringstream a, b, err;
        const int ca = cli::run(static_cast<int>(args.size()), args.data(), a, err);
        const int cb = cli::run(static_cast<int>(args.size()), args.data(), b, err);
        c.check(ca == 0 && cb == 0 && a.str() == b.str() && !a.str().empty(),
                std::string("sample report not reproducible: ") + args[3]);
    }
}

void chen_equality(Criterion& c) {
    for (int n = 2; n <= 8; ++n) {
        const FamilySpec spec{FamilyKind::gaussian, n, 2.0, 0.0, WeightChoice::unit};
        const auto fam = make_family(spec);
        const double chen = chen_lower(fam.measure, fam.weight, fam.candidate).value;
        const double gap = spectral_gap(fam.measure, fam.weight).value;
        c.check(rel(chen, gap) <= 1e-4, spec.label() + fmt(": chen %.10g vs solver %.10g", chen, gap));
    }
    const std::vector<std::pair<int, std::vector<double>>> high = {
        {2, {3.5, 4.0, 6.0}}, {3, {4.0, 4.5, 6.0}}, {4, {4.8, 5.0, 6.0}}, {6, {6.0, 8.0}}};
    for (const auto& [n, betas] : high) {
        for (double beta : betas) {
            const FamilySpec spec{FamilyKind::generalized_cauchy, n, 2.0, beta, WeightChoice::one_plus_r2};
            const auto fam = make_family(spec);
            const double chen = chen_lower(fam.measure, fam.weight, fam.candidate).value;
            const double gap = spectral_gap(fam.measure, fam.weight).value;
            c.check(rel(chen, gap) <= 1e-4, spec.label() + fmt(": chen %.10g vs solver %.10g", chen, gap));
        }
    }
    const std::vector<std::pair<int, std::vector<double>>> low = {
        {2, {1.5, 2.0, 2.5, 3.0}}, {3, {1.6, 2.5, 3.0, 3.5}}, {4, {2.5, 3.0, 4.0}}, {6, {3.5, 4.0, 5.0}}};
    for (const auto& [n, betas] : low) {
        for (double beta : betas) {
            const FamilySpec spec{FamilyKind::generalized_cauchy, n, 2.0, beta, WeightChoice::one_plus_r2};
            const auto fam = make_family(spec);
            const double chen =
                chen_lower(fam.measure, fam.weight, one_plus_r2_power_candidate(beta / 2.0 - n / 4.0)).value;
            const double expect = (beta - n / 2.0) * (beta - n / 2.0);
            c.check(rel(chen, expect) <= 1e-6, spec.label() + fmt(": chen %.12g vs %.12g", chen, expect));
        }
    }
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria = {
        {"cauchy exact radial gaps", cauchy_exact},
        {"gaussian radial gap and eigenpair residual", gaussian_radial},
        {"exp-power bracket containment", exp_power_brackets},
        {"ball radial lower bound, n^2 slope, full bracket table", ball},
        {"exp-power slope n^(1-2/alpha)", exp_power_slopes},
        {"lower/upper bound soundness over the catalog", soundness_sweep},
        {"weighted gaussian bounds and comparison term", weighted_gaussian},
        {"gamma ratio inequalities and log-gamma accuracy", gamma_inequalities},
        {"monte carlo rayleigh estimates and determinism", monte_carlo},
        {"chen variational equality", chen_equality},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Criterion c{static_cast<int>(i + 1), criteria[i].first};
        const auto t0 = Clock::now();
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            c.check(false, std::string("exception: ") + e.what());
        }
        const bool ok = c.failures.empty();
        if (!ok) ++failed;
        std::printf("%s %2d %s (%d checks, %zu failed, %.1f s)\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    c.checks, c.failures.size(), seconds_since(t0));
        for (const auto& s : c.notes) std::printf("       %s\n", s.c_str());
        for (const auto& s : c.failures) std::printf("       fail: %s\n", s.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
