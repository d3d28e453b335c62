#include "curveig/solver.hpp"

#include <Eigen/SparseLU>

#include <cmath>

namespace curveig {

namespace {

ScalarField reciprocal(const ScalarField& f) {
    return {f.grid, 1.0 / f.values};
}

double binom(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Per-node coefficients of the linearized operator: F^{ij} at h, and the
// zeroth-order coefficient c = ((p-1)/k)(f/lambda)^{1/k} u^{(p-1)/k-1}.
struct NodeOperator {
    Eigen::ArrayXXd Fg;  // size x 1 (S^1) or size x 3 (F11, F12, F22)
    Eigen::ArrayXd c;
};

NodeOperator node_operator(const ShapeBundle& b, const ProblemSpec& spec) {
    const int m = b.u.size(), n = spec.n;
    NodeOperator op;
    op.Fg.resize(m, n == 1 ? 1 : 3);
    op.c.resize(m);
    const double a = (spec.p - 1) / spec.k;
    for (int i = 0; i < m; ++i) {
        if (n == 1) {
            op.Fg(i, 0) = 1.0;  // F(h) = h11 when k = n = 1
        } else {
            Eigen::Matrix2d A;
            A << b.h(i, 0), b.h(i, 1), b.h(i, 1), b.h(i, 2);
            const Eigen::MatrixXd G = quotient_F_gradient(A, spec.k);
            op.Fg(i, 0) = G(0, 0);
            op.Fg(i, 1) = G(0, 1);
            op.Fg(i, 2) = G(1, 1);
        }
        op.c[i] = a * std::pow(spec.f.values[i] / spec.lambda, 1.0 / spec.k) *
                  std::pow(b.u.values[i], a - 1.0);
    }
    return op;
}

void require_admissible(const ShapeBundle& b, const char* who) {
    if (b.min_u <= 0 || b.min_eig_h <= 0) {
        int worst = 0;
        double margin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < b.u.size(); ++i) {
            const double mi = std::min(b.u.values[i], b.radii(i, 0));
            if (mi < margin) {
                margin = mi;
                worst = i;
            }
        }
        throw admissibility_error(std::string(who) + ": iterate left the admissible cone",
                                  worst);
    }
}

// Emits the linearization stencil of a node: coefficients multiplying the raw
// covariant-Hessian components (wH11, wH12, wH22) plus an identity weight.
// add(col, coef) accumulates into row i of whatever is being assembled.
template <typename Add>
void emit_stencil(const SphereGrid& g, int i, double wH11, double wH12, double wH22,
                  double wId, Add&& add) {
    if (g.dim() == 1) {
        const double h2 = 12 * g.dtheta() * g.dtheta();
        auto col = [&](int dj) { return g.wrap(i + dj, 0).first; };
        add(col(-2), -wH11 / h2);
        add(col(-1), 16 * wH11 / h2);
        add(i, -30 * wH11 / h2 + wId);
        add(col(1), 16 * wH11 / h2);
        add(col(2), -wH11 / h2);
        return;
    }
    const int j = i / g.n_phi(), l = i % g.n_phi();
    const double dt = g.dtheta(), dp = g.dphi();
    const double theta = g.coords()(i, 0);
    const double st = std::sin(theta), ct = std::cos(theta);
    auto col = [&](int dj, int dl) {
        auto [jj, ll] = g.wrap(j + dj, l + dl);
        return g.index(jj, ll);
    };
    // H11 = u_tt
    add(col(-1, 0), wH11 / (dt * dt));
    add(i, -2 * wH11 / (dt * dt) + wId);
    add(col(1, 0), wH11 / (dt * dt));
    // H12 = (u_tp - cot(t) u_p)/sin(t)
    const double cx = wH12 / (4 * dt * dp * st);
    add(col(1, 1), cx);
    add(col(1, -1), -cx);
    add(col(-1, 1), -cx);
    add(col(-1, -1), cx);
    const double cp = -wH12 * ct / (st * st) / (2 * dp);
    add(col(0, 1), cp);
    add(col(0, -1), -cp);
    // H22 = u_pp/sin(t)^2 + cot(t) u_t
    const double cpp = wH22 / (st * st * dp * dp);
    add(col(0, 1), cpp);
    add(i, -2 * cpp);
    add(col(0, -1), cpp);
    const double cth = wH22 * ct / st / (2 * dt);
    add(col(1, 0), cth);
    add(col(-1, 0), -cth);
}

}  // namespace

ProblemSpec spec_from_f(int n, int k, double p, double lambda, const ScalarField& f) {
    if (k < 1 || k > n || n < 1 || n > 2)
        throw std::invalid_argument("spec_from_f: need 1 <= k <= n <= 2");
    if (f.values.minCoeff() <= 0)
        throw std::invalid_argument("spec_from_f: f must be positive");
    if (lambda <= 0)
        throw std::invalid_argument("spec_from_f: lambda must be positive");
    ProblemSpec spec;
    spec.n = n;
    spec.k = k;
    spec.p = p;
    spec.lambda = lambda;
    spec.f = f;
    spec.psi = reciprocal(f);
    spec.grid = f.grid;
    spec.tol_newton = n == 1 ? 1e-9 : 1e-8;
    return spec;
}

ProblemSpec spec_from_psi(int n, int k, double p, double lambda, const ScalarField& psi) {
    if (psi.values.minCoeff() <= 0)
        throw std::invalid_argument("spec_from_psi: psi must be positive");
    return spec_from_f(n, k, p, lambda, reciprocal(psi));
}

ScalarField residual(const ScalarField& u, const ProblemSpec& spec) {
    const ShapeBundle b = bundle_from_support(u);
    require_admissible(b, "residual");
    const int m = u.size();
    ScalarField r{u.grid, Eigen::ArrayXd(m)};
    const double a = (spec.p - 1) / spec.k;
    for (int i = 0; i < m; ++i) {
        const VecX<double> mu = b.radii.row(i).transpose();
        const double F = hessian_quotient(mu, spec.k);
        r.values[i] = F - std::pow(spec.f.values[i] / spec.lambda, 1.0 / spec.k) *
                              std::pow(u.values[i], a);
    }
    return r;
}

ScalarField primal_residual(const RadialBundle& bundle, const ProblemSpec& spec) {
    if (!bundle.star_shaped)
        throw admissibility_error("primal_residual: hypersurface is not strictly star-shaped");
    const int m = bundle.rho.size();
    ScalarField r{bundle.rho.grid, Eigen::ArrayXd(m)};
    for (int i = 0; i < m; ++i) {
        const VecX<double> kap = bundle.kappa.row(i).transpose();
        if (!in_gamma_k(kap, spec.k))
            throw admissibility_error("primal_residual: kappa left Gamma_k", i);
        Eigen::Vector3d nu = Eigen::Vector3d::Zero();
        for (int c = 0; c <= spec.n; ++c) nu[c] = bundle.nu(i, c);
        const double fnu = interpolate(spec.f, nu);
        r.values[i] = std::pow(bundle.u_of_rho.values[i], spec.p - 1) *
                          sigma_k(kap, spec.k) -
                      spec.lambda / fnu;
    }
    return r;
}

ScalarField jacobian_apply(const ScalarField& u, const ScalarField& du,
                           const ProblemSpec& spec) {
    const ShapeBundle b = bundle_from_support(u);
    require_admissible(b, "jacobian_apply");
    const NodeOperator op = node_operator(b, spec);
    const Eigen::ArrayXXd dH = covariant_hessian(du);
    const int m = u.size();
    ScalarField out{u.grid, Eigen::ArrayXd(m)};
    for (int i = 0; i < m; ++i) {
        double L;
        if (spec.n == 1) {
            L = op.Fg(i, 0) * (dH(i, 0) + du.values[i]);
        } else {
            L = op.Fg(i, 0) * (dH(i, 0) + du.values[i]) +
                2 * op.Fg(i, 1) * dH(i, 1) +
                op.Fg(i, 2) * (dH(i, 2) + du.values[i]);
        }
        out.values[i] = L - op.c[i] * du.values[i];
    }
    return out;
}

Eigen::SparseMatrix<double> assemble_jacobian(const ScalarField& u,
                                              const ProblemSpec& spec) {
    const ShapeBundle b = bundle_from_support(u);
    require_admissible(b, "assemble_jacobian");
    const NodeOperator op = node_operator(b, spec);
    const SphereGrid& g = *u.grid;
    const int m = g.size();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(m) * 12);
    for (int i = 0; i < m; ++i) {
        auto add = [&](int col, double coef) { trip.emplace_back(i, col, coef); };
        if (spec.n == 1) {
            emit_stencil(g, i, op.Fg(i, 0), 0, 0, op.Fg(i, 0) - op.c[i], add);
        } else {
            emit_stencil(g, i, op.Fg(i, 0), 2 * op.Fg(i, 1), op.Fg(i, 2),
                         op.Fg(i, 0) + op.Fg(i, 2) - op.c[i], add);
        }
    }
    Eigen::SparseMatrix<double> J(m, m);
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
}

Eigen::RowVectorXd volume_gradient_row(const ScalarField& u) {
    const SphereGrid& g = *u.grid;
    const int m = g.size();
    const ShapeBundle b = bundle_from_support(u);
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(m);
    auto add = [&](int col, double coef) { row[col] += coef; };
    for (int i = 0; i < m; ++i) {
        const double w = g.weights()[i], ui = u.values[i];
        if (g.dim() == 1) {
            const double det = b.h(i, 0);
            // d/du_j of w u det(h)/2 with d det = dH11 + du
            emit_stencil(g, i, 0.5 * w * ui, 0, 0, 0.5 * w * (det + ui),
                         [&](int col, double coef) { add(col, coef); });
        } else {
            const double h11 = b.h(i, 0), h12 = b.h(i, 1), h22 = b.h(i, 2);
            const double det = h11 * h22 - h12 * h12;
            // d det = h22 dh11 + h11 dh22 - 2 h12 dh12, dh = dH + du I
            const double c = w * ui / 3.0;
            emit_stencil(g, i, c * h22, -2 * c * h12, c * h11,
                         w * det / 3.0 + c * (h11 + h22),
                         [&](int col, double coef) { add(col, coef); });
        }
    }
    return row;
}

AdmissibilityReport admissibility(const ScalarField& u, const ProblemSpec& spec) {
    const ShapeBundle b = bundle_from_support(u);
    AdmissibilityReport rep;
    rep.positive = b.min_u > 0;
    rep.convex = b.min_eig_h > 0;
    double worst = std::min(b.min_u, b.min_eig_h);
    rep.gamma_k = true;
    for (int i = 0; i < u.size(); ++i) {
        if (b.radii.row(i).minCoeff() <= 0) {
            rep.gamma_k = false;
            continue;
        }
        const VecX<double> kap = b.kappa.row(i).transpose();
        const VecX<double> e = elementary_symmetric(kap);
        for (int j = 1; j <= spec.k; ++j) {
            worst = std::min(worst, e[j]);
            if (e[j] <= 0) rep.gamma_k = false;
        }
    }
    rep.worst_margin = worst;
    return rep;
}

ScalarField sphere_guess(const ProblemSpec& spec) {
    if (spec.p <= spec.k + 1)
        throw std::invalid_argument("sphere_guess: requires p > k+1");
    const double fbar = integrate(spec.f) / spec.grid->weights().sum();
    const double r = std::pow(spec.lambda / (fbar * binom(spec.n, spec.k)),
                              1.0 / (spec.p - 1 - spec.k));
    return constant_field(spec.grid, r);
}

SolveReport newton_solve(const ProblemSpec& spec, const ScalarField& u0) {
    SolveReport rep;
    rep.u = u0;
    ScalarField u = u0;
    AdmissibilityReport adm = admissibility(u, spec);
    if (!(adm.positive && adm.convex && adm.gamma_k)) {
        rep.success = false;
        rep.admissible_throughout = false;
        rep.message = "newton_solve: initial guess is not admissible";
        return rep;
    }
    double res = residual(u, spec).values.abs().maxCoeff();
    rep.newton_path.push_back({0, 0.0, res});
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    for (int it = 1; it <= spec.max_iter; ++it) {
        if (res <= spec.tol_newton) {
            rep.success = true;
            break;
        }
        const Eigen::SparseMatrix<double> J = assemble_jacobian(u, spec);
        lu.compute(J);
        if (lu.info() != Eigen::Success) {
            rep.message = "newton_solve: singular Jacobian";
            break;
        }
        const Eigen::VectorXd rhs = -residual(u, spec).values.matrix();
        const Eigen::VectorXd delta = lu.solve(rhs);
        double alpha = 1.0;
        bool accepted = false;
        while (alpha >= 1e-8) {
            ScalarField trial{u.grid, u.values + alpha * delta.array()};
            const AdmissibilityReport ta = admissibility(trial, spec);
            if (ta.positive && ta.convex && ta.gamma_k &&
                ta.worst_margin >= spec.margin * adm.worst_margin) {
                const double tres = residual(trial, spec).values.abs().maxCoeff();
                if (tres < res) {
                    u = trial;
                    res = tres;
                    adm = ta;
                    rep.newton_path.push_back({it, alpha, res});
                    rep.iterations = it;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            rep.message = "newton_solve: line search failed (damping underflow)";
            break;
        }
    }
    rep.u = u;
    rep.final_residual_sup = res;
    if (res <= spec.tol_newton) rep.success = true;
    if (!rep.success && rep.message.empty())
        rep.message = "newton_solve: max_iter exceeded";
    return rep;
}

}  // namespace curveig
