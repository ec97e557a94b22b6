#pragma once
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "specgap/bounds.hpp"
#include "specgap/radial_model.hpp"

namespace specgap {

enum class FamilyKind { exponential_power, uniform_ball, generalized_cauchy, gaussian };
enum class WeightChoice { unit, one_plus_r2, inv_one_plus_r2 };

/// CLI names: exp-power, ball, cauchy, gaussian / unit, one-plus-r2, inv-one-plus-r2.
std::string_view to_string(FamilyKind kind);
std::string_view to_string(WeightChoice weight);
FamilyKind parse_family(std::string_view name);
WeightChoice parse_weight(std::string_view name);

struct FamilySpec {
    FamilyKind family = FamilyKind::gaussian;
    int n = 3;
    double alpha = 2.0;  ///< exponential power exponent
    double beta = 0.0;   ///< Cauchy exponent
    WeightChoice weight = WeightChoice::unit;

    /// Throws InvalidInput: n >= 2; alpha >= 1 for exp-power; beta > n/2 for Cauchy.
    void validate() const;
    std::string label() const;
};

struct Family {
    FamilySpec spec;
    RadialMeasure measure;
    Weight weight;
    CandidateFunction candidate;
};

Family make_family(const FamilySpec& spec, double tail_tol = 1e-12);

RadialPotential exponential_power_potential(double alpha);
RadialPotential ball_potential();
RadialPotential cauchy_potential(double beta);
Weight make_weight(WeightChoice choice);

CandidateFunction linear_candidate();
/// r^p, p != 0.
CandidateFunction power_candidate(double p);
/// (1 + r^2)^e.
CandidateFunction one_plus_r2_power_candidate(double e);
/// f' = r^q; f = r^(q+1)/(q+1), or log r when q = -1.
CandidateFunction power_derivative_candidate(double q);
/// The family's designated test function for the variational lower bound.
CandidateFunction designated_candidate(const FamilySpec& spec);
/// Test functions used for Rayleigh-quotient upper bounds (some may be non-integrable for a family).
std::vector<CandidateFunction> rayleigh_candidates(const FamilySpec& spec);

enum class ReferenceKind { exact, bracket, order_only, none };
enum class Scope { radial, full };

std::string_view to_string(ReferenceKind kind);
std::string_view to_string(Scope scope);

struct ReferenceGap {
    ReferenceKind kind = ReferenceKind::none;
    double value = std::numeric_limits<double>::quiet_NaN();
    double lower = std::numeric_limits<double>::quiet_NaN();
    double upper = std::numeric_limits<double>::quiet_NaN();
    double order_exponent = std::numeric_limits<double>::quiet_NaN();
    std::string source;
};

ReferenceGap reference_gap(const FamilySpec& spec, Scope scope);

/// Parameter sweep used for soundness checks (61 cases), sorted by (family, weight, n, parameter).
std::vector<FamilySpec> catalog_grid();

}  // namespace specgap
