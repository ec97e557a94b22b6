#include "specgap/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "specgap/bounds.hpp"
#include "specgap/errors.hpp"

namespace specgap {

namespace {

constexpr double kLogFloor = -700.0;      // windows stop where the log-density drops below this
constexpr int kMaxCells = 1 << 19;        // per solve; the fine solve doubles it
constexpr double kTruncationRtol = 1e-8;  // relative shift accepted as "window converged"
constexpr int kMaxEscalations = 12;

double log_sum_exp(const std::vector<double>& x) {
    const double m = *std::max_element(x.begin(), x.end());
    if (!std::isfinite(m))
        return m;
    double s = 0.0;
    for (double v : x)
        s += std::exp(v - m);
    return m + std::log(s);
}

// Normalized pencil coefficients: gamma_k = c_k / m_k, alpha_k = c_k / m_{k+1}.
struct Pencil {
    std::vector<double> gamma;
    std::vector<double> alpha;
};

Pencil make_pencil(const Discretization& d) {
    const std::size_t faces = d.log_conductance.size();
    Pencil p;
    p.gamma.resize(faces);
    p.alpha.resize(faces);
    for (std::size_t k = 0; k < faces; ++k) {
        p.gamma[k] = std::exp(d.log_conductance[k] - d.log_mass[k]);
        p.alpha[k] = std::exp(d.log_conductance[k] - d.log_mass[k + 1]);
    }
    return p;
}

// Sylvester inertia of K - lambda M via the pivots of its LDL^T factorization, each pivot
// divided by its cell mass. The recurrence never forms K or M, so disparate cell masses do
// not cancel.
int count_below(const Pencil& p, double lambda) {
    double e = -lambda;
    int count = 0;
    const std::size_t faces = p.gamma.size();
    for (std::size_t k = 0; k < faces; ++k) {
        double piv = p.gamma[k] + e;
        if (piv == 0.0)
            piv = -1e-300;
        if (piv < 0.0)
            ++count;
        e = p.alpha[k] * (e / piv) - lambda;
    }
    if (e < 0.0)
        ++count;
    return count;
}

double bisect_second(const Pencil& p) {
    double hi = 1.0;
    int guard = 0;
    while (count_below(p, hi) < 2) {
        hi *= 2.0;
        if (++guard > 1100 || !std::isfinite(hi))
            throw ConvergenceError("could not bracket the spectral gap from above");
    }
    double lo = hi * 0.5;
    guard = 0;
    while (count_below(p, lo) >= 2) {
        hi = lo;
        lo *= 0.5;
        if (++guard > 1100 || !(lo > 0.0))
            throw ConvergenceError("could not bracket the spectral gap from below");
    }
    for (int iter = 0; iter < 200 && hi - lo > 2e-16 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (count_below(p, mid) >= 2)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Solves T x = b for tridiagonal T by Gaussian elimination with partial pivoting.
// Zero pivots are replaced by a tiny value, which is what inverse iteration wants.
std::vector<double> solve_tridiagonal(std::vector<double> dl, std::vector<double> d, std::vector<double> du,
                                      std::vector<double> b) {
    const std::size_t n = d.size();
    if (n == 1)
        return {b[0] / (d[0] != 0.0 ? d[0] : 1e-300)};
    std::vector<double> du2(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0)
                d[i] = 1e-300;
            const double fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            du2[i] = 0.0;
        } else {
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            const double temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            const double tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    if (d[n - 1] == 0.0)
        d[n - 1] = 1e-300;
    std::vector<double> x(n);
    x[n - 1] = b[n - 1] / d[n - 1];
    x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;)
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    return x;
}

struct PairSolve {
    double coarse = 0.0;
    double fine = 0.0;
    double value = 0.0;
    double error = 0.0;
    int cells = 0;
    Discretization fine_grid;
};

PairSolve solve_pair(const RadialMeasure& measure, const Weight& weight, Grading grading, int n_cells,
                     double lo, double hi) {
    PairSolve out;
    const auto coarse = discretize_window(measure, weight, grading, n_cells, lo, hi);
    out.coarse = smallest_nonzero_eigenvalue(coarse);
    out.fine_grid = discretize_window(measure, weight, grading, 2 * n_cells, lo, hi);
    out.fine = smallest_nonzero_eigenvalue(out.fine_grid);
    out.value = std::max(0.0, (4.0 * out.fine - out.coarse) / 3.0);
    out.error = std::abs(out.coarse - out.fine) / 3.0;
    out.cells = 2 * n_cells;
    return out;
}

std::string fmt(const char* f, double a, double b, double c) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// First log radius at or above the table's lower cut where the log-density reaches the floor.
// Below it r^(n-1) would underflow the cell masses for large n; the mass dropped is below e^-700.
double lower_log_edge(const RadialMeasure& measure) {
    double a = measure.log_lower_cut();
    if (measure.log_density_at_log(a) >= kLogFloor)
        return a;
    double b = std::log(measure.quantile(0.5));
    for (int i = 0; i < 200 && b - a > 1e-12 * (1.0 + std::abs(b)); ++i) {
        const double m = 0.5 * (a + b);
        (measure.log_density_at_log(m) >= kLogFloor ? b : a) = m;
    }
    return b;
}

}  // namespace

void GridSpec::validate() const {
    if (n_cells < 64 || n_cells % 64 != 0 || ((n_cells / 64) & (n_cells / 64 - 1)) != 0)
        throw InvalidInput("n_cells must be 64 times a power of two");
    if (r_max_override && !(*r_max_override > 0.0))
        throw InvalidInput("r_max override must be positive");
}

double Discretization::log_radius(int i) const {
    const double x = centre[static_cast<std::size_t>(i)];
    return grading == Grading::logarithmic ? x : std::log(x);
}

double Discretization::radius(int i) const {
    const double x = centre[static_cast<std::size_t>(i)];
    return grading == Grading::logarithmic ? std::exp(x) : x;
}

std::vector<double> Discretization::mass() const {
    std::vector<double> m(log_mass.size());
    std::transform(log_mass.begin(), log_mass.end(), m.begin(), [](double v) { return std::exp(v); });
    return m;
}

std::vector<double> Discretization::stiffness_offdiagonal() const {
    std::vector<double> off(log_conductance.size());
    std::transform(log_conductance.begin(), log_conductance.end(), off.begin(),
                   [](double v) { return -std::exp(v); });
    return off;
}

std::vector<double> Discretization::stiffness_diagonal() const {
    std::vector<double> diag(centre.size(), 0.0);
    for (std::size_t k = 0; k < log_conductance.size(); ++k) {
        const double c = std::exp(log_conductance[k]);
        diag[k] += c;
        diag[k + 1] += c;
    }
    return diag;
}

std::vector<double> Discretization::apply_stiffness(const std::vector<double>& u) const {
    if (u.size() != centre.size())
        throw InvalidInput("vector length does not match the grid");
    std::vector<double> out(u.size(), 0.0);
    for (std::size_t k = 0; k < log_conductance.size(); ++k) {
        const double flux = std::exp(log_conductance[k]) * (u[k + 1] - u[k]);
        out[k] -= flux;
        out[k + 1] += flux;
    }
    return out;
}

double Discretization::rayleigh_quotient(const std::vector<double>& u) const {
    if (u.size() != centre.size())
        throw InvalidInput("vector length does not match the grid");
    double energy = 0.0;
    for (std::size_t k = 0; k < log_conductance.size(); ++k) {
        const double du = u[k + 1] - u[k];
        energy += std::exp(log_conductance[k]) * du * du;
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        mean += std::exp(log_mass[i]) * u[i];
    double var = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        var += std::exp(log_mass[i]) * (u[i] - mean) * (u[i] - mean);
    if (!(var > 0.0))
        throw DegenerateFunction("grid function has zero variance");
    return energy / var;
}

Discretization discretize_window(const RadialMeasure& measure, const Weight& weight, Grading grading,
                                 int n_cells, double lo, double hi) {
    if (n_cells < 2)
        throw InvalidInput("need at least two cells");
    if (!(hi > lo))
        throw InvalidInput("empty discretization window");
    Discretization d;
    d.grading = grading;
    d.lo = lo;
    d.hi = hi;
    d.h = (hi - lo) / n_cells;
    const double log_h = std::log(d.h);
    const std::size_t n = static_cast<std::size_t>(n_cells);
    d.centre.resize(n);
    d.log_mass.resize(n);
    d.log_conductance.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = lo + (static_cast<double>(i) + 0.5) * d.h;
        d.centre[i] = x;
        d.log_mass[i] = (grading == Grading::logarithmic ? measure.log_density_at_log(x)
                                                         : measure.log_density(x)) +
                        log_h;
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double x = lo + static_cast<double>(k + 1) * d.h;
        if (grading == Grading::logarithmic) {
            // int sigma^2 g_r^2 w dr = int sigma^2 g_s^2 (w r) r^-2 ds with r = e^s
            d.log_conductance[k] = weight.log_s2(x) + measure.log_density_at_log(x) - 2.0 * x - log_h;
        } else {
            d.log_conductance[k] = weight.log_s2(std::log(x)) + measure.log_density(x) - log_h;
        }
    }
    const double total = log_sum_exp(d.log_mass);
    if (!std::isfinite(total))
        throw DiscretizationError("cell masses are not finite");
    for (auto& v : d.log_mass) {
        v -= total;
        if (!std::isfinite(v) || std::exp(v) == 0.0)
            throw DiscretizationError("a cell mass underflows to zero");
    }
    for (auto& v : d.log_conductance) {
        v -= total;
        if (!std::isfinite(v))
            throw DiscretizationError("a face conductance is not finite");
    }
    return d;
}

Discretization discretize(const RadialMeasure& measure, const Weight& weight, const GridSpec& grid) {
    grid.validate();
    validate_weight(weight, measure);
    const bool bounded = measure.potential().bounded();
    double hi_r = bounded ? measure.domain_end() : measure.r_max();
    if (grid.r_max_override)
        hi_r = bounded ? std::min(*grid.r_max_override, hi_r) : *grid.r_max_override;
    if (grid.grading == Grading::logarithmic) {
        double hi = bounded && !grid.r_max_override ? std::log(measure.domain_end()) : std::log(hi_r);
        if (!bounded && !grid.r_max_override)
            hi = measure.log_r_max();
        return discretize_window(measure, weight, grid.grading, grid.n_cells, lower_log_edge(measure), hi);
    }
    return discretize_window(measure, weight, grid.grading, grid.n_cells, 0.0, hi_r);
}

int eigenvalue_count_below(const Discretization& d, double lambda) {
    return count_below(make_pencil(d), lambda);
}

double smallest_nonzero_eigenvalue(const Discretization& d) {
    if (d.size() < 2)
        throw InvalidInput("need at least two cells");
    return bisect_second(make_pencil(d));
}

std::vector<double> eigenvector(const Discretization& d, double lambda) {
    const std::size_t n = d.centre.size();
    const Pencil p = make_pencil(d);
    // symmetric form A = M^-1/2 K M^-1/2
    std::vector<double> diag(n, 0.0), off(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        diag[k] += p.gamma[k];
        diag[k + 1] += p.alpha[k];
        off[k] = -std::exp(d.log_conductance[k] - 0.5 * (d.log_mass[k] + d.log_mass[k + 1]));
    }
    std::vector<double> root_mass(n);
    for (std::size_t i = 0; i < n; ++i)
        root_mass[i] = std::exp(0.5 * d.log_mass[i]);
    auto deflate = [&](std::vector<double>& x) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            dot += root_mass[i] * x[i];
        for (std::size_t i = 0; i < n; ++i)
            x[i] -= dot * root_mass[i];
        double norm = 0.0;
        for (double v : x)
            norm += v * v;
        norm = std::sqrt(norm);
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw ConvergenceError("inverse iteration produced a degenerate vector");
        for (auto& v : x)
            v /= norm;
    };
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = root_mass[i] * (static_cast<double>(i) - 0.5 * static_cast<double>(n));
    deflate(x);
    std::vector<double> shifted(diag);
    for (auto& v : shifted)
        v -= lambda;
    for (int iter = 0; iter < 4; ++iter) {
        x = solve_tridiagonal(off, shifted, off, x);
        deflate(x);
    }
    if (x[n - 1] < 0.0)
        for (auto& v : x)
            v = -v;
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i)
        u[i] = x[i] / root_mass[i];
    return u;
}

GapEstimate spectral_gap(const RadialMeasure& measure, const Weight& weight, const GridSpec& grid) {
    grid.validate();
    validate_weight(weight, measure);
    const bool bounded = measure.potential().bounded();
    const bool logarithmic = grid.grading == Grading::logarithmic;
    double lo = logarithmic ? lower_log_edge(measure) : 0.0;
    double hi;
    if (bounded) {
        hi = logarithmic ? std::log(measure.domain_end()) : measure.domain_end();
        if (grid.r_max_override && *grid.r_max_override < measure.domain_end())
            hi = logarithmic ? std::log(*grid.r_max_override) : *grid.r_max_override;
    } else if (grid.r_max_override) {
        hi = logarithmic ? std::log(*grid.r_max_override) : *grid.r_max_override;
    } else {
        hi = logarithmic ? measure.log_r_max() : measure.r_max();
    }
    if (!(hi > lo))
        throw InvalidInput("discretization window is empty");

    GapEstimate est;
    int cells = grid.n_cells;
    PairSolve cur = solve_pair(measure, weight, grid.grading, cells, lo, hi);
    const bool escalate = !bounded || (grid.r_max_override && hi < (logarithmic ? std::log(measure.domain_end())
                                                                                 : measure.domain_end()));
    if (escalate) {
        const double ref = logarithmic ? std::log(measure.quantile(0.5)) : 0.0;
        const double edge = bounded ? (logarithmic ? std::log(measure.domain_end()) : measure.domain_end())
                                    : std::numeric_limits<double>::infinity();
        auto log_density = [&](double x) {
            return logarithmic ? measure.log_density_at_log(x) : measure.log_density(x);
        };
        for (int round = 0; round < kMaxEscalations; ++round) {
            double next = std::min(ref + 2.0 * (hi - ref), edge);
            bool clipped = next >= edge;
            // stop the window where the density has fallen below the floor
            const int probes = 256;
            for (int j = 1; j <= probes; ++j) {
                const double x = hi + (next - hi) * j / probes;
                if (log_density(x) < kLogFloor) {
                    next = x;
                    clipped = true;
                    break;
                }
            }
            if (!(next > hi * (1 + 1e-12) + 1e-12))
                break;
            const double growth = (next - lo) / (hi - lo);
            int new_cells = cells;
            while (new_cells < kMaxCells && new_cells < cells * growth)
                new_cells *= 2;
            PairSolve wider = solve_pair(measure, weight, grid.grading, new_cells, lo, next);
            const double shift = std::abs(wider.value - cur.value);
            cur = std::move(wider);
            hi = next;
            cells = new_cells;
            ++est.windows;
            if (shift <= std::max(10.0 * cur.error, kTruncationRtol * cur.value))
                break;
            if (clipped) {
                est.warnings.push_back(
                    fmt("truncation: widening the window to log r = %.6g shifted the gap by %.3g "
                        "(error estimate %.3g); the density floor prevents further widening",
                        hi, shift, cur.error));
                break;
            }
            if (round == kMaxEscalations - 1)
                est.warnings.push_back(fmt("truncation: window still moving after %.0f widenings "
                                           "(last shift %.3g, error estimate %.3g)",
                                           kMaxEscalations, shift, cur.error));
        }
    }
    est.value = cur.value;
    est.error_estimate = cur.error;
    est.coarse_value = cur.coarse;
    est.fine_value = cur.fine;
    est.n_cells_used = cur.cells;
    est.log_r_max_used = logarithmic ? hi : std::log(hi);
    est.r_max_used = logarithmic ? std::exp(hi) : hi;
    if (est.error_estimate > 1e-3 * est.value)
        est.warnings.push_back(fmt("mesh: Richardson error estimate %.3g is large relative to the gap %.6g "
                                   "(%.0f cells)",
                                   est.error_estimate, est.value, static_cast<double>(est.n_cells_used)));

    const auto u = eigenvector(cur.fine_grid, cur.fine);
    const auto mass = cur.fine_grid.mass();
    double mean = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        mean += mass[i] * u[i];
        norm += mass[i] * u[i] * u[i];
    }
    if (std::abs(mean) > 1e-8 || std::abs(norm - 1.0) > 1e-8)
        throw ConvergenceError("eigenvector normalization failed");
    est.eigenfunction.value = u;
    est.eigenfunction.mass = mass;
    est.eigenfunction.log_radius.resize(u.size());
    for (int i = 0; i < cur.fine_grid.size(); ++i)
        est.eigenfunction.log_radius[static_cast<std::size_t>(i)] = cur.fine_grid.log_radius(i);
    return est;
}

double residual_check(const RadialMeasure& measure, const Weight& weight, const CandidateFunction& f,
                      double lambda) {
    if (!(lambda >= 0.0))
        throw InvalidInput("lambda must be nonnegative");
    if (!f.f || !f.df || !f.d2f)
        throw InvalidInput("candidate function must supply f, f' and f''");
    const auto b = drift(measure, weight);
    const auto radii = measure.diagnostic_radii();
    std::vector<double> q(radii.size()), scale(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        const double fr = f.f(r);
        q[i] = weight.s2(r) * f.d2f(r) + b(r) * f.df(r) + lambda * fr;
        scale[i] = 1.0 + std::abs(fr);
        if (std::isnan(q[i]))
            throw DomainError("residual is NaN");
    }
    double c = 0.0;
    if (lambda == 0.0) {
        const auto [mn, mx] = std::minmax_element(q.begin(), q.end());
        c = 0.5 * (*mn + *mx);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        worst = std::max(worst, std::abs(q[i] - c) / scale[i]);
    return worst;
}

}  // namespace specgap
