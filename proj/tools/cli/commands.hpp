#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "report.hpp"
#include "specgap/catalog.hpp"
#include "specgap/eigensolver.hpp"

namespace specgap::cli {

struct Options {
    FamilySpec spec;
    double tail_tol = 1e-12;
    int cells = 4096;
    Grading grading = Grading::logarithmic;
    std::uint64_t seed = 7;
    std::size_t count = 100000;
    std::string function = "linear";  ///< linear | radial-quadratic | designated
    std::string scope = "all";        ///< verify scope
    std::string table_id;
    std::vector<double> alphas{1.0, 2.0, 4.0};
    std::vector<int> dims;  ///< empty: the table's default dimensions
    std::string format = "json";

    GridSpec grid() const;
};

/// Radial lower bounds (section "radial-lower") and Rayleigh upper bounds ("radial-upper") for a
/// family. Bounds whose hypotheses fail are reported with status "hypothesis_failed" and NaN value;
/// non-integrable test functions are reported as "not_integrable".
std::vector<Record> radial_bound_records(const Family& family);

struct CaseEvaluation {
    FamilySpec spec;
    GapEstimate gap;
    std::vector<Record> bounds;
    double worst_lower_slack = 0.0;  ///< min over lower bounds of gap + tol - bound (>= 0 passes)
    double worst_upper_slack = 0.0;  ///< min over upper bounds of bound - gap + tol
};

/// Solver gap plus all radial bounds, with tol = 1e-6 (1 + gap).
CaseEvaluation evaluate_case(const FamilySpec& spec, const GridSpec& grid, double tail_tol);

RunReport cmd_bounds(const Options& opts);
RunReport cmd_eigen(const Options& opts);
/// Scopes: gamma-inequalities, cauchy-exact, gaussian, bracketing, references, all.
RunReport cmd_verify(const Options& opts);
/// Ids: exp-power-asymptotics, cauchy-n3, cauchy-n2, gaussian-weighted, ball.
RunReport cmd_table(const Options& opts);
RunReport cmd_sample(const Options& opts);

/// "2..32" (inclusive range) or "2,4,8".
std::vector<int> parse_dims(const std::string& text);
std::vector<double> parse_list(const std::string& text);

/// Full command line entry point. Exit codes: 0 success, 1 numerical or verification failure,
/// 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specgap::cli
