#include "specgap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "specgap/errors.hpp"

namespace specgap {

namespace {

// Kronrod abscissae, x[1], x[3], x[5] are the Gauss nodes.
constexpr double kXk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr double kWk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

void check(double v, double x) {
    if (!std::isfinite(v))
        throw DomainError("integrand is not finite at x = " + std::to_string(x));
}

}  // namespace

QuadratureResult kronrod15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    check(fc, c);
    double kronrod = kWk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        check(f1, c - dx);
        check(f2, c + dx);
        kronrod += kWk[j] * (f1 + f2);
        if (j % 2 == 1)
            gauss += kWg[j / 2] * (f1 + f2);
    }
    QuadratureResult r;
    r.value = kronrod * h;
    r.error = std::abs((kronrod - gauss) * h);
    r.evaluations = 15;
    r.converged = true;
    return r;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, double abs_tol, int max_intervals) {
    return integrate_partitioned(f, {a, b}, rel_tol, abs_tol, max_intervals);
}

QuadratureResult integrate_partitioned(const std::function<double(double)>& f,
                                       const std::vector<double>& breakpoints, double rel_tol,
                                       double abs_tol, int max_intervals) {
    if (breakpoints.size() < 2)
        throw InvalidInput("integrate: need at least two breakpoints");
    for (double x : breakpoints)
        if (!std::isfinite(x))
            throw InvalidInput("integrate: interval must be finite");
    QuadratureResult total;
    std::priority_queue<Piece> heap;
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    int intervals = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        if (!(b > a))
            continue;
        auto piece = kronrod15(f, a, b);
        heap.push({a, b, piece.value, piece.error});
        value += piece.value;
        error += piece.error;
        evaluations += piece.evaluations;
        ++intervals;
    }
    if (heap.empty()) {
        total.converged = true;
        return total;
    }
    max_intervals = std::max(max_intervals, intervals + 1);
    while (error > std::max(abs_tol, rel_tol * std::abs(value)) && intervals < max_intervals) {
        Piece worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            break;  // cannot split further in floating point
        heap.pop();
        auto left = kronrod15(f, worst.a, mid);
        auto right = kronrod15(f, mid, worst.b);
        evaluations += 30;
        ++intervals;
        heap.push({worst.a, mid, left.value, left.error});
        heap.push({mid, worst.b, right.value, right.error});
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        if (intervals % 64 == 0) {
            // resum to shed accumulated rounding in the running totals
            value = 0.0;
            error = 0.0;
            auto copy = heap;
            while (!copy.empty()) {
                value += copy.top().value;
                error += copy.top().error;
                copy.pop();
            }
        }
    }
    total.value = value;
    total.error = std::max(error, 0.0);
    total.evaluations = evaluations;
    total.converged = total.error <= std::max(abs_tol, rel_tol * std::abs(value));
    return total;
}

}  // namespace specgap
