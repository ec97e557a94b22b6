#pragma once
#include <optional>
#include <string>
#include <vector>

#include "specgap/radial_model.hpp"

namespace specgap {

struct CandidateFunction;

enum class Grading {
    uniform,      ///< cells uniform in r
    logarithmic,  ///< cells uniform in log r
};

struct GridSpec {
    int n_cells = 4096;
    Grading grading = Grading::logarithmic;
    std::optional<double> r_max_override;

    /// Throws InvalidInput unless n_cells is 64 times a power of two.
    void validate() const;
};

/// Finite-volume form of the Dirichlet form int sigma^2 g'^2 dnu and the mass int g^2 dnu.
/// Cells are uniform in the mapped coordinate x (x = r or x = log r). Masses are normalized to sum
/// to one and stored, like the face conductances, as logarithms so that nothing underflows.
struct Discretization {
    Grading grading = Grading::logarithmic;
    double lo = 0.0;  ///< window in the mapped coordinate
    double hi = 0.0;
    double h = 0.0;
    std::vector<double> centre;           ///< cell centres (mapped coordinate)
    std::vector<double> log_mass;         ///< size N
    std::vector<double> log_conductance;  ///< size N-1; face k sits between cells k and k+1

    int size() const { return static_cast<int>(centre.size()); }
    double log_radius(int i) const;
    double radius(int i) const;

    std::vector<double> mass() const;
    std::vector<double> stiffness_diagonal() const;
    std::vector<double> stiffness_offdiagonal() const;
    /// K u, computed in flux form so that K 1 = 0 exactly.
    std::vector<double> apply_stiffness(const std::vector<double>& u) const;
    /// sum_k c_k (u_{k+1} - u_k)^2 / (sum m u^2 - (sum m u)^2).
    double rayleigh_quotient(const std::vector<double>& u) const;
};

/// Tabulated eigenfunction: unit nu-norm, nu-mean zero, sign fixed so the outermost value is positive.
struct EigenFunctionTable {
    std::vector<double> log_radius;
    std::vector<double> value;
    std::vector<double> mass;
};

struct GapEstimate {
    double value = 0.0;
    double error_estimate = 0.0;
    int n_cells_used = 0;
    double r_max_used = 0.0;
    double log_r_max_used = 0.0;
    double coarse_value = 0.0;  ///< lambda_N on the final window
    double fine_value = 0.0;    ///< lambda_2N on the final window
    int windows = 1;
    std::vector<std::string> warnings;
    EigenFunctionTable eigenfunction;
};

Discretization discretize(const RadialMeasure& measure, const Weight& weight, const GridSpec& grid);

/// Same on an explicit window [lo, hi] of the mapped coordinate.
Discretization discretize_window(const RadialMeasure& measure, const Weight& weight, Grading grading,
                                 int n_cells, double lo, double hi);

/// Number of eigenvalues of the pencil (K, M) strictly below lambda.
int eigenvalue_count_below(const Discretization& d, double lambda);

/// Smallest nonzero eigenvalue of (K, M) by Sturm bisection.
double smallest_nonzero_eigenvalue(const Discretization& d);

/// Eigenvector for an eigenvalue near lambda by inverse iteration, deflated against constants.
std::vector<double> eigenvector(const Discretization& d, double lambda);

GapEstimate spectral_gap(const RadialMeasure& measure, const Weight& weight, const GridSpec& grid = {});

/// sup over the diagnostic grid of |sigma^2 f'' + b f' + lambda f - c| / (1 + |f|), with c = 0
/// when lambda > 0 and c the best constant when lambda = 0.
double residual_check(const RadialMeasure& measure, const Weight& weight, const CandidateFunction& f,
                      double lambda);

}  // namespace specgap
