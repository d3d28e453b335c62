#include "curveig/continuation.hpp"

#include <Eigen/SparseLU>

#include <cmath>

namespace curveig {

namespace {

double binom(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double symmetry_defect_of(const ScalarField& u) {
    return (u.values - antipodal_reflect(u).values).abs().maxCoeff();
}

// Least-squares line a + b x through (x_i, y_i); returns the intercept a.
double intercept(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    if (n == 1) return y[0];
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    const double b = (n * sxy - sx * sy) / det;
    return (sy - b * sx) / n;
}

}  // namespace

ContinuationSchedule ContinuationSchedule::geometric(int k, int steps, double base) {
    ContinuationSchedule s;
    for (int j = 1; j <= steps; ++j)
        s.p_list.push_back(k + 1 + std::pow(base, -j));
    return s;
}

ScalarField normalize_by_volume(const ScalarField& u) {
    const int n = u.grid->dim();
    double V = volume_support(u);
    if (V <= 0)
        throw std::invalid_argument("normalize_by_volume: nonpositive volume");
    ScalarField out{u.grid, u.values / std::pow(V, 1.0 / (n + 1))};
    V = volume_support(out);  // one re-normalization pass for quadrature drift
    out.values /= std::pow(V, 1.0 / (n + 1));
    return out;
}

double lambda_from_volume(double V, double p, int k, int n) {
    return std::pow(V, -(p - k - 1) / (n + 1));
}

EigenReport continuation_eigen(const ProblemSpec& spec,
                               const ContinuationSchedule& schedule) {
    EigenReport rep;
    const int n = spec.n, k = spec.k;
    const double ball_volume = volume_support(constant_field(spec.grid, 1.0));
    const double r_unit_ball = std::pow(ball_volume, -1.0 / (n + 1));
    // Inner solves run at lambda_eff = mean(f) sigma_k(1,..,1), which puts the
    // round-sphere radius at 1; the lambda = 1 solution u = c v (with
    // c = lambda_eff^{-1/(p-1-k)}) underflows doubles for p near k+1, but
    // lambda_p = lambda_eff V(v)^{-(p-k-1)/(n+1)} stays O(1) by dilation
    // covariance, so the scaled variable v is all we ever form.
    const double fbar = integrate(spec.f) / spec.grid->weights().sum();
    const double lambda_eff = fbar * binom(n, k);
    ScalarField warm;  // previous normalized solution
    std::vector<ScalarField> normalized;
    for (double pj : schedule.p_list) {
        ProblemSpec inner = spec;
        inner.p = pj;
        inner.lambda = lambda_eff;
        const double r_guess = sphere_guess(inner).values[0];
        ScalarField u0 = (schedule.warm_start && warm.grid)
                             ? ScalarField{spec.grid, warm.values * (r_guess / r_unit_ball)}
                             : constant_field(spec.grid, r_guess);
        SolveReport sr = newton_solve(inner, u0);
        if (!sr.success) {
            rep.message = "continuation_eigen: inner solve failed at p = " +
                          std::to_string(pj) + " (" + sr.message + ")";
            rep.steps.push_back(std::move(sr));
            rep.p_list.push_back(pj);
            return rep;
        }
        const double V = volume_support(sr.u);
        ScalarField tilde = normalize_by_volume(sr.u);
        rep.p_list.push_back(pj);
        rep.volume_list.push_back(V);
        rep.lambda_list.push_back(lambda_eff * lambda_from_volume(V, pj, k, n));
        rep.residual_list.push_back(sr.final_residual_sup);
        rep.symmetry_defect_list.push_back(symmetry_defect_of(tilde));
        warm = tilde;
        normalized.push_back(std::move(tilde));
        rep.steps.push_back(std::move(sr));
    }

    // Linear extrapolation in p - k - 1 over the last four schedule points.
    const int J = static_cast<int>(rep.p_list.size());
    const int fit = std::min(4, J);
    std::vector<double> xs, ys;
    for (int j = J - fit; j < J; ++j) xs.push_back(rep.p_list[j] - (k + 1));
    for (int j = J - fit; j < J; ++j) ys.push_back(rep.lambda_list[j]);
    rep.lambda0 = intercept(xs, ys);

    ScalarField u0{spec.grid, Eigen::ArrayXd(spec.grid->size())};
    std::vector<double> col(fit);
    for (int i = 0; i < spec.grid->size(); ++i) {
        for (int j = 0; j < fit; ++j) col[j] = normalized[J - fit + j].values[i];
        u0.values[i] = intercept(xs, col);
    }
    rep.u0 = normalize_by_volume(u0);
    rep.symmetry_defect = symmetry_defect_of(rep.u0);

    // Verify the limit against the eigenvalue equation u^k sigma_k = lambda psi.
    const ShapeBundle b = bundle_from_support(rep.u0);
    double sup = 0;
    for (int i = 0; i < rep.u0.size(); ++i) {
        const VecX<double> kap = b.kappa.row(i).transpose();
        sup = std::max(sup, std::abs(std::pow(rep.u0.values[i], k) * sigma_k(kap, k) -
                                     rep.lambda0 * spec.psi.values[i]));
    }
    rep.final_residual = sup;
    rep.success = sup <= 50.0 * spec.grid->nominal_error();
    if (!rep.success)
        rep.message = "continuation_eigen: limit shape fails the eigenvalue equation check";
    return rep;
}

DirectEigenResult direct_eigen_solve(const ProblemSpec& spec, const ScalarField& u_init,
                                     double lambda_init) {
    DirectEigenResult out;
    const int m = spec.grid->size();
    ScalarField u = u_init;
    double lambda = lambda_init;
    const double a = (spec.p - 1) / spec.k;  // = 1 at p = k+1
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    double res = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= spec.max_iter; ++it) {
        ProblemSpec cur = spec;
        cur.lambda = lambda;
        ScalarField R;
        try {
            R = residual(u, cur);
        } catch (const admissibility_error& e) {
            out.message = std::string("direct_eigen_solve: ") + e.what();
            break;
        }
        const double rv = volume_support(u) - 1.0;
        res = std::max(R.values.abs().maxCoeff(), std::abs(rv));
        out.iterations = it - 1;
        if (res <= cur.tol_newton) {
            out.success = true;
            break;
        }
        // Bordered system: [J  dR/dlambda; dV/du  0].
        const Eigen::SparseMatrix<double> J = assemble_jacobian(u, cur);
        const Eigen::RowVectorXd vrow = volume_gradient_row(u);
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(J.nonZeros() + 2 * m);
        for (int c = 0; c < J.outerSize(); ++c)
            for (Eigen::SparseMatrix<double>::InnerIterator itr(J, c); itr; ++itr)
                trip.emplace_back(static_cast<int>(itr.row()), static_cast<int>(itr.col()),
                                  itr.value());
        for (int i = 0; i < m; ++i) {
            const double dRdl = std::pow(spec.f.values[i] / lambda, 1.0 / spec.k) *
                                std::pow(u.values[i], a) / (spec.k * lambda);
            trip.emplace_back(i, m, dRdl);
            trip.emplace_back(m, i, vrow[i]);
        }
        Eigen::SparseMatrix<double> B(m + 1, m + 1);
        B.setFromTriplets(trip.begin(), trip.end());
        lu.compute(B);
        if (lu.info() != Eigen::Success) {
            out.message = "direct_eigen_solve: singular bordered system";
            break;
        }
        Eigen::VectorXd rhs(m + 1);
        rhs.head(m) = -R.values.matrix();
        rhs[m] = -rv;
        const Eigen::VectorXd delta = lu.solve(rhs);
        double alpha = 1.0;
        bool accepted = false;
        while (alpha >= 1e-8) {
            ScalarField tu{u.grid, u.values + alpha * delta.head(m).array()};
            const double tl = lambda + alpha * delta[m];
            if (tl > 0) {
                const AdmissibilityReport adm = admissibility(tu, spec);
                if (adm.positive && adm.convex && adm.gamma_k) {
                    u = tu;
                    lambda = tl;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            out.message = "direct_eigen_solve: step rejected (admissibility)";
            break;
        }
    }
    out.u = u;
    out.lambda = lambda;
    out.final_residual = res;
    if (!out.success && out.message.empty())
        out.message = "direct_eigen_solve: max_iter exceeded";
    return out;
}

double barrier_radius(const ProblemSpec& spec) {
    if (spec.p <= spec.k + 1)
        throw std::invalid_argument("barrier_radius: requires p > k+1");
    const double unconstrained =
        std::pow(spec.lambda * spec.psi.values.maxCoeff() / binom(spec.n, spec.k),
                 1.0 / (spec.p - 1 - spec.k));
    return std::max(1.0 + 1e-6, unconstrained);
}

}  // namespace curveig
