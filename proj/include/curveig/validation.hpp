#pragma once

#include "curveig/continuation.hpp"

#include <string>
#include <vector>

namespace curveig {

/// One executable a-priori bound: satisfied iff lhs <= rhs + 1e-9 |rhs|.
/// notes records any constant correction applied relative to the literal
/// statement being checked.
struct BoundReport {
    std::string name;
    double lhs = 0;
    double rhs = 0;
    bool satisfied = false;
    double slack = 0;
    std::string notes;
};

BoundReport make_bound_report(const std::string& name, double lhs, double rhs,
                              const std::string& notes = "");

/// Two-sided volume-ratio bound for a lambda = 1 solve, with the binomial
/// correction sigma_k(1,..,1); notes record how the literal bound fares.
std::vector<BoundReport> check_volume_ratio(const ScalarField& u,
                                            const ProblemSpec& spec);

/// The max-u chain: Maclaurin volume inequality, half-sphere moment
/// inequality, and the assembled bound max u <= C V^{1/p*}.
std::vector<BoundReport> check_max_u_chain(const ScalarField& u,
                                           const ProblemSpec& spec);

/// |grad u| <= max u (+ discretization allowance).
BoundReport check_gradient_bound(const ScalarField& u);

/// sup W <= (2n(p-1)/k) (max u)^{(p-1)/k} ||f^{1/k}||_{C^{1,1}} for lambda = 1.
BoundReport check_W_bound(const ScalarField& u, const ProblemSpec& spec);

/// Bracket for every lambda_{p_j} derived from the corrected volume-ratio
/// bound; the unit-ball volume uses the same grid quadrature as lambda_p.
std::vector<BoundReport> check_lambda_bounds(const EigenReport& report,
                                             const ProblemSpec& spec);

/// Solve-mode structural checks: convexity margin, symmetry defect for even
/// data, and multi-start agreement (three perturbed admissible starts).
std::vector<BoundReport> check_solution_properties(const ScalarField& u,
                                                   const ProblemSpec& spec,
                                                   unsigned seed);

/// Eigen-mode structural checks: convexity margin, symmetry defect, and
/// schedule independence of lambda_0 (base-2 vs base-3 schedule).
std::vector<BoundReport> check_eigen_properties(const EigenReport& report,
                                                const ProblemSpec& spec);

bool all_satisfied(const std::vector<BoundReport>& reports);

}  // namespace curveig
