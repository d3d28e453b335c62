#pragma once

#include "curveig/solver.hpp"

#include <array>

namespace curveig {

/// State of the normalized anisotropic sigma_k power flow in support form.
struct FlowState {
    ScalarField u;
    double t = 0;
    double dt = 0;
    bool renormalize = true;
    double volume0 = 0;
    // (t, V, sup-residual) samples recorded at stopping checks.
    std::vector<std::array<double, 3>> history;
};

/// Normal speed s = -sign(1-p) (f sigma_k(kappa))^{1/(1-p)}, outward for p > 1.
ScalarField normal_speed(const ShapeBundle& bundle, const ProblemSpec& spec);

/// One explicit Euler step u <- u + dt (s - eta u); eta fixes dV/dt = 0 when
/// renormalizing, and the step is followed by an exact volume rescale. The
/// step is rejected and dt halved while admissibility fails.
/// Throws on dt underflow (< 1e-12).
void flow_step(FlowState& state, const ProblemSpec& spec);

/// Back-computed eigen pair of the current shape: lambda as the weighted mean
/// of f u^{p-1} sigma_k(kappa) on the volume-normalized shape, residual as the
/// sup deviation from that balance.
struct FlowResidual {
    double lambda = 0;
    double sup = 0;
};
FlowResidual flow_residual(const ScalarField& u, const ProblemSpec& spec);

struct FlowResult {
    FlowState state;
    bool converged = false;
    double residual = 0;
    double lambda = 0;       // back-computed on the normalized steady state
    ScalarField u_lambda1;   // steady state rescaled to solve at lambda = 1
    long steps = 0;
};

/// Runs the renormalized flow from u0 until the back-computed residual falls
/// below stop_tol or t exceeds t_max.
FlowResult flow_run(const ProblemSpec& spec, const ScalarField& u0, double t_max,
                    double stop_tol);

}  // namespace curveig
