#pragma once

#include "curveig/solver.hpp"

namespace curveig {

/// Decreasing schedule p_j -> k+1 from above, default p_j = k+1 + base^{-j}.
struct ContinuationSchedule {
    std::vector<double> p_list;
    bool warm_start = true;

    static ContinuationSchedule geometric(int k, int steps = 8, double base = 2.0);
};

/// Outcome of the continuation p -> k+1: eigenvalue sequence, extrapolated
/// eigenvalue/shape, and per-step diagnostics.
struct EigenReport {
    std::vector<double> p_list;
    std::vector<double> lambda_list;
    std::vector<double> volume_list;  // volumes of the scaled inner solves
    std::vector<double> residual_list;         // inner Newton final residuals
    std::vector<double> symmetry_defect_list;  // per normalized iterate
    double lambda0 = 0;
    ScalarField u0;  // normalized limit shape, volume 1
    double symmetry_defect = 0;
    double final_residual = 0;  // sup | u0^k sigma_k(kappa) - lambda0 psi |
    std::vector<SolveReport> steps;
    bool success = false;
    std::string message;
};

/// u / V(u)^{1/(n+1)}, re-normalized once for quadrature drift.
ScalarField normalize_by_volume(const ScalarField& u);

/// lambda_p = V^{-(p-k-1)/(n+1)}.
double lambda_from_volume(double V, double p, int k, int n);

/// Solves the p_j problems (in a dilation-covariant scaled variable, so that
/// iterates stay O(1) when p is close to k+1) with warm starts,
/// volume-normalizes, and extrapolates (lambda_0, u_0) linearly in p - k - 1
/// over the last four schedule points. spec.p must equal k+1 (the eigen mode).
EigenReport continuation_eigen(const ProblemSpec& spec,
                               const ContinuationSchedule& schedule);

struct DirectEigenResult {
    ScalarField u;
    double lambda = 0;
    int iterations = 0;
    double final_residual = 0;
    bool success = false;
    std::string message;
};

/// Newton on the extended unknowns (u, lambda) with the volume-1 constraint;
/// cross-check for the continuation limit at p = k+1.
DirectEigenResult direct_eigen_solve(const ProblemSpec& spec, const ScalarField& u_init,
                                     double lambda_init);

/// Outer barrier radius max(1 + 1e-6, (lambda max(psi)/sigma_k(1,..,1))^{1/(p-1-k)}).
double barrier_radius(const ProblemSpec& spec);

}  // namespace curveig
