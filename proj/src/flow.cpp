#include "curveig/flow.hpp"
#include "curveig/continuation.hpp"

#include <cmath>

namespace curveig {

namespace {

double cfl_dt(const ShapeBundle& b, const SphereGrid& g, double c_cfl = 0.2) {
    const double rmin = b.radii.col(0).minCoeff();
    double spacing;
    if (g.dim() == 1) {
        spacing = g.dtheta();
    } else {
        const double sin_min = std::sin(0.5 * g.dtheta());
        spacing = std::min(g.dtheta(), sin_min * g.dphi());
    }
    return c_cfl * rmin * rmin * spacing * spacing;
}

Eigen::ArrayXd det_h(const ShapeBundle& b) {
    if (b.radii.cols() == 1) return b.radii.col(0);
    return b.radii.col(0) * b.radii.col(1);
}

}  // namespace

ScalarField normal_speed(const ShapeBundle& bundle, const ProblemSpec& spec) {
    if (spec.p == 1.0)
        throw std::invalid_argument("normal_speed: p = 1 has no power flow normalization");
    const int m = bundle.u.size();
    ScalarField s{bundle.u.grid, Eigen::ArrayXd(m)};
    const double sgn = spec.p > 1 ? 1.0 : -1.0;
    for (int i = 0; i < m; ++i) {
        const VecX<double> kap = bundle.kappa.row(i).transpose();
        const double sk = sigma_k(kap, spec.k);
        if (!(sk > 0) || bundle.radii.row(i).minCoeff() <= 0)
            throw admissibility_error("normal_speed: sigma_k <= 0 at a node", i);
        s.values[i] = sgn * std::pow(spec.f.values[i] * sk, 1.0 / (1.0 - spec.p));
    }
    return s;
}

void flow_step(FlowState& state, const ProblemSpec& spec) {
    const ShapeBundle b = bundle_from_support(state.u);
    const ScalarField s = normal_speed(b, spec);
    double eta = 0;
    if (state.renormalize) {
        const Eigen::ArrayXd dh = det_h(b);
        const double num = (state.u.grid->weights() * s.values * dh).sum();
        eta = num / ((spec.n + 1) * b.volume);
    }
    while (true) {
        if (state.dt < 1e-12)
            throw std::runtime_error("flow_step: dt underflow");
        ScalarField trial{state.u.grid,
                          state.u.values + state.dt * (s.values - eta * state.u.values)};
        const ShapeBundle tb = bundle_from_support(trial);
        if (tb.convex && tb.min_u > 0) {
            if (state.renormalize) {
                // exact volume projection on top of the eta correction
                trial.values *= std::pow(state.volume0 / tb.volume,
                                         1.0 / (spec.n + 1));
            }
            state.t += state.dt;
            state.u = std::move(trial);
            return;
        }
        state.dt *= 0.5;
    }
}

FlowResidual flow_residual(const ScalarField& u, const ProblemSpec& spec) {
    const ScalarField tilde = normalize_by_volume(u);
    const ShapeBundle b = bundle_from_support(tilde);
    const int m = u.size();
    Eigen::ArrayXd lhs(m);
    for (int i = 0; i < m; ++i) {
        const VecX<double> kap = b.kappa.row(i).transpose();
        lhs[i] = spec.f.values[i] * std::pow(tilde.values[i], spec.p - 1) *
                 sigma_k(kap, spec.k);
    }
    FlowResidual out;
    out.lambda = (u.grid->weights() * lhs).sum() / u.grid->weights().sum();
    out.sup = 0;
    for (int i = 0; i < m; ++i)
        out.sup = std::max(out.sup, std::abs(lhs[i] / spec.f.values[i] -
                                             out.lambda / spec.f.values[i]));
    return out;
}

FlowResult flow_run(const ProblemSpec& spec, const ScalarField& u0, double t_max,
                    double stop_tol) {
    if (spec.p <= spec.k + 1)
        throw std::invalid_argument("flow_run: requires p > k+1");
    FlowResult out;
    FlowState& st = out.state;
    st.u = u0;
    st.renormalize = true;
    ShapeBundle b0 = bundle_from_support(u0);
    if (!(b0.convex && b0.min_u > 0))
        throw admissibility_error("flow_run: u0 is not admissible");
    st.volume0 = b0.volume;
    st.dt = cfl_dt(b0, *u0.grid);
    const int check_every = 16;
    FlowResidual fr = flow_residual(st.u, spec);
    st.history.push_back({st.t, st.volume0, fr.sup});
    while (fr.sup > stop_tol && st.t < t_max) {
        for (int i = 0; i < check_every && st.t < t_max; ++i) {
            flow_step(st, spec);
            ++out.steps;
        }
        fr = flow_residual(st.u, spec);
        st.history.push_back({st.t, volume_support(st.u), fr.sup});
    }
    out.residual = fr.sup;
    out.lambda = fr.lambda;
    out.converged = fr.sup <= stop_tol;
    const ScalarField tilde = normalize_by_volume(st.u);
    // rescale the normalized steady state to the lambda = 1 equation
    const double c = std::pow(fr.lambda, -1.0 / (spec.p - 1 - spec.k));
    out.u_lambda1 = ScalarField{st.u.grid, c * tilde.values};
    return out;
}

}  // namespace curveig
