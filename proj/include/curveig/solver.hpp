#pragma once

#include "curveig/shape.hpp"
#include "curveig/symfun.hpp"

#include <Eigen/SparseCore>

#include <string>
#include <vector>

namespace curveig {

/// Problem data for F(Hess u + u I) = (f/lambda)^{1/k} u^{(p-1)/k} on S^n.
/// psi = 1/f node-wise.
struct ProblemSpec {
    int n = 2;
    int k = 1;
    double p = 3.0;
    double lambda = 1.0;
    ScalarField f;
    ScalarField psi;
    GridPtr grid;
    double tol_newton = 1e-8;
    int max_iter = 60;
    double margin = 0.1;  // admissibility safeguard for the line search
};

ProblemSpec spec_from_f(int n, int k, double p, double lambda, const ScalarField& f);
ProblemSpec spec_from_psi(int n, int k, double p, double lambda, const ScalarField& psi);

struct NewtonStep {
    int step;
    double damping;
    double residual_sup;
};

struct SolveReport {
    ScalarField u;  // best iterate
    int iterations = 0;
    double final_residual_sup = 0;
    std::vector<NewtonStep> newton_path;
    bool admissible_throughout = true;
    bool success = false;
    std::string message;
};

struct AdmissibilityReport {
    bool positive = false;
    bool convex = false;
    bool gamma_k = false;
    double worst_margin = 0;
};

/// Support-form residual R = F(h) - (f/lambda)^{1/k} u^{(p-1)/k}.
/// Throws admissibility_error (with the worst node) if u is not positive or
/// h is not positive definite everywhere.
ScalarField residual(const ScalarField& u, const ProblemSpec& spec);

/// Radial-form residual u^{p-1} sigma_k(kappa) - lambda/f(nu), with f
/// composed with the normal map by interpolation.
ScalarField primal_residual(const RadialBundle& bundle, const ProblemSpec& spec);

/// Directional derivative of the support-form residual:
/// L[du] = F^{ij} (Hess du + du I)_{ij} - ((p-1)/k)(f/lambda)^{1/k} u^{(p-1)/k-1} du.
ScalarField jacobian_apply(const ScalarField& u, const ScalarField& du,
                           const ProblemSpec& spec);

/// Sparse matrix of jacobian_apply in the finite-difference stencil sparsity.
Eigen::SparseMatrix<double> assemble_jacobian(const ScalarField& u,
                                              const ProblemSpec& spec);

/// Row vector of the discrete volume derivative dV/du (used by the
/// volume-constrained eigen solve).
Eigen::RowVectorXd volume_gradient_row(const ScalarField& u);

AdmissibilityReport admissibility(const ScalarField& u, const ProblemSpec& spec);

/// Round-sphere warm start: u = r with r^{p-1-k} sigma_k(1,..,1) = lambda/mean(f).
ScalarField sphere_guess(const ProblemSpec& spec);

/// Damped Newton with admissibility-margin safeguard and monotone residual
/// decrease. Failure reports carry the best iterate instead of throwing.
SolveReport newton_solve(const ProblemSpec& spec, const ScalarField& u0);

}  // namespace curveig
