#include "curveig/validation.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace curveig {

namespace {

double binom(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

bool is_even_field(const ScalarField& f) {
    return (f.values - antipodal_reflect(f).values).abs().maxCoeff() <= 1e-12;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

BoundReport make_bound_report(const std::string& name, double lhs, double rhs,
                              const std::string& notes) {
    BoundReport r;
    r.name = name;
    r.lhs = lhs;
    r.rhs = rhs;
    r.satisfied = lhs <= rhs + 1e-9 * std::abs(rhs);
    r.slack = rhs - lhs;
    r.notes = notes;
    return r;
}

std::vector<BoundReport> check_volume_ratio(const ScalarField& u,
                                            const ProblemSpec& spec) {
    const double V = volume_support(u);
    const double Vb = volume_support(constant_field(u.grid, 1.0));
    const double val =
        std::pow(V / Vb, (spec.p - spec.k - 1) / (spec.n + 1));
    const double C = binom(spec.n, spec.k);
    const double fmax = spec.f.values.maxCoeff();
    const double fmin = spec.f.values.minCoeff();
    const bool literal_ok = (1.0 / fmax <= val + 1e-9) && (val <= 1.0 / fmin + 1e-9);
    const std::string notes =
        "corrected by sigma_k(1,..,1) = " + fmt(C) +
        "; literal bound [1/max f, 1/min f] = [" + fmt(1.0 / fmax) + ", " +
        fmt(1.0 / fmin) + "] vs ratio^exp = " + fmt(val) +
        (literal_ok ? " (literal holds)" : " (literal fails)");
    return {
        make_bound_report("volume_ratio_lower", 1.0 / (C * fmax), val, notes),
        make_bound_report("volume_ratio_upper", val, 1.0 / (C * fmin), notes),
    };
}

std::vector<BoundReport> check_max_u_chain(const ScalarField& u,
                                           const ProblemSpec& spec) {
    const SphereGrid& g = *u.grid;
    const int n = spec.n, k = spec.k;
    const double p_star = 1.0 + (spec.p - 1) * n / k;
    const double V = volume_support(u);
    const double C = binom(n, k);
    const double c_chain = std::pow(C, -static_cast<double>(n) / k);
    const double fmin = spec.f.values.minCoeff();

    double int_up_f = 0, int_up = 0;
    for (int i = 0; i < u.size(); ++i) {
        const double up = std::pow(u.values[i], p_star);
        int_up += g.weights()[i] * up;
        int_up_f += g.weights()[i] * up *
                    std::pow(spec.f.values[i], static_cast<double>(n) / k);
    }

    int argmax = 0;
    u.values.maxCoeff(&argmax);
    const double u_max = u.values[argmax];
    double moment = 0;  // I(p*) at the argmax direction
    for (int i = 0; i < u.size(); ++i) {
        const double dot = g.nodes().row(argmax).dot(g.nodes().row(i));
        if (dot >= 0) moment += g.weights()[i] * std::pow(dot, p_star);
    }

    const std::string cnotes = "Maclaurin constant chain with normalized means: c = " +
                               fmt(c_chain) + ", p* = " + fmt(p_star);
    std::vector<BoundReport> out;
    out.push_back(make_bound_report("volume_chain", int_up_f,
                                    c_chain * (n + 1) * V, cnotes));
    out.push_back(make_bound_report(
        "halfsphere_moment", std::pow(u_max, p_star) * moment, int_up,
        "I(p*) = " + fmt(moment) + " at the argmax direction"));
    const double bound = std::pow(
        c_chain * (n + 1) * V /
            (std::pow(fmin, static_cast<double>(n) / k) * moment),
        1.0 / p_star);
    out.push_back(make_bound_report("max_u", u_max, bound, cnotes));
    return out;
}

BoundReport check_gradient_bound(const ScalarField& u) {
    const Eigen::ArrayXXd grad = covariant_gradient(u);
    double sup = 0;
    for (int i = 0; i < u.size(); ++i)
        sup = std::max(sup, grad.row(i).matrix().norm());
    return make_bound_report("gradient_bound", sup,
                             u.values.maxCoeff() + 10 * u.grid->nominal_error());
}

BoundReport check_W_bound(const ScalarField& u, const ProblemSpec& spec) {
    const int n = spec.n, k = spec.k;
    ScalarField gk{spec.f.grid,
                   spec.f.values.pow(1.0 / static_cast<double>(k))};
    double norm = gk.values.abs().maxCoeff();
    const Eigen::ArrayXXd grad = covariant_gradient(gk);
    for (int i = 0; i < gk.size(); ++i)
        norm = std::max(norm, grad.row(i).matrix().norm());
    const Eigen::ArrayXXd hess = covariant_hessian(gk);
    for (int i = 0; i < gk.size(); ++i) {
        if (n == 1) {
            norm = std::max(norm, std::abs(hess(i, 0)));
        } else {
            const double mean = 0.5 * (hess(i, 0) + hess(i, 2));
            const double rad = std::hypot(0.5 * (hess(i, 0) - hess(i, 2)), hess(i, 1));
            norm = std::max(norm, std::max(std::abs(mean - rad), std::abs(mean + rad)));
        }
    }
    const ShapeBundle b = bundle_from_support(u);
    const double a = (spec.p - 1) / k;
    const double rhs = 2.0 * n * a * std::pow(u.values.maxCoeff(), a) * norm;
    return make_bound_report(
        "W_bound", b.W.maxCoeff(), rhs,
        "uses the ||f^{1/k}||_{C^{1,1}} form, grid surrogate norm = " +
            fmt(norm));
}

std::vector<BoundReport> check_lambda_bounds(const EigenReport& report,
                                             const ProblemSpec& spec) {
    const double C = binom(spec.n, spec.k);
    const double Vb = volume_support(constant_field(spec.grid, 1.0));
    const double psi_max = spec.psi.values.maxCoeff();
    const double psi_min = spec.psi.values.minCoeff();
    const double tol = 1e-6;
    std::vector<BoundReport> out;
    const std::string notes =
        "corrected volume-ratio bound with f = 1/psi; unit-ball volume from grid quadrature = " +
        fmt(Vb);
    for (size_t j = 0; j < report.lambda_list.size(); ++j) {
        const double x = report.p_list[j] - spec.k - 1;
        const double scale = std::pow(Vb, -x / (spec.n + 1));
        const double lower = C / psi_max * scale;
        const double upper = C / psi_min * scale;
        const std::string tag = "lambda_p[" + std::to_string(j) + "]";
        out.push_back(make_bound_report(tag + "_lower", lower * (1 - tol),
                                        report.lambda_list[j], notes));
        out.push_back(make_bound_report(tag + "_upper", report.lambda_list[j],
                                        upper * (1 + tol), notes));
    }
    return out;
}

std::vector<BoundReport> check_solution_properties(const ScalarField& u,
                                                   const ProblemSpec& spec,
                                                   unsigned seed) {
    std::vector<BoundReport> out;
    const ShapeBundle b = bundle_from_support(u);
    out.push_back(make_bound_report("convexity_margin", 0.0, b.min_eig_h,
                                    "min eigenvalue of h over all nodes"));
    if (is_even_field(spec.f)) {
        const double defect =
            (u.values - antipodal_reflect(u).values).abs().maxCoeff();
        out.push_back(make_bound_report("symmetry_defect", defect, 1e-4));
    } else {
        BoundReport skip = make_bound_report("symmetry_defect", 0.0, 0.0,
                                             "skipped: data is not even");
        skip.satisfied = true;
        out.push_back(skip);
    }
    // Multi-start agreement: three perturbed admissible starts.
    if (spec.p > spec.k + 1) {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        const ScalarField base = sphere_guess(spec);
        std::vector<ScalarField> sols;
        for (int s = 0; s < 3; ++s) {
            Eigen::Vector3d axis(unif(rng), unif(rng), unif(rng));
            if (spec.n == 1) axis.z() = 0;
            axis.normalize();
            const double eps = 0.02 + 0.02 * s;
            ScalarField u0{spec.grid, Eigen::ArrayXd(spec.grid->size())};
            for (int i = 0; i < u0.size(); ++i) {
                double dot = 0;
                for (int c = 0; c <= spec.n; ++c)
                    dot += axis[c] * spec.grid->nodes()(i, c);
                u0.values[i] = base.values[i] * (1.0 + eps * dot * dot);
            }
            const SolveReport sr = newton_solve(spec, u0);
            if (!sr.success) {
                out.push_back(make_bound_report("multi_start_agreement", 1.0, 0.0,
                                                "a perturbed start failed to converge"));
                return out;
            }
            sols.push_back(sr.u);
        }
        double worst = 0;
        for (size_t a = 0; a < sols.size(); ++a)
            for (size_t c = a + 1; c < sols.size(); ++c)
                worst = std::max(worst,
                                 (sols[a].values - sols[c].values).abs().maxCoeff());
        out.push_back(make_bound_report("multi_start_agreement", worst, 1e-6,
                                        "three perturbed starts, sup-norm pairwise"));
    }
    return out;
}

std::vector<BoundReport> check_eigen_properties(const EigenReport& report,
                                                const ProblemSpec& spec) {
    std::vector<BoundReport> out;
    const ShapeBundle b = bundle_from_support(report.u0);
    out.push_back(make_bound_report("convexity_margin", 0.0, b.min_eig_h,
                                    "min eigenvalue of h on the limit shape"));
    if (is_even_field(spec.psi)) {
        out.push_back(
            make_bound_report("symmetry_defect", report.symmetry_defect, 1e-4));
    } else {
        BoundReport skip = make_bound_report("symmetry_defect", 0.0, 0.0,
                                             "skipped: psi is not even");
        skip.satisfied = true;
        out.push_back(skip);
    }
    const int steps = static_cast<int>(report.p_list.size());
    const EigenReport alt = continuation_eigen(
        spec, ContinuationSchedule::geometric(spec.k, steps, 3.0));
    if (alt.lambda_list.size() == report.lambda_list.size()) {
        out.push_back(make_bound_report("schedule_independence",
                                        std::abs(report.lambda0 - alt.lambda0), 2e-3,
                                        "base-2 vs base-3 schedule"));
    } else {
        out.push_back(make_bound_report("schedule_independence", 1.0, 0.0,
                                        "alternate schedule failed to converge"));
    }
    return out;
}

bool all_satisfied(const std::vector<BoundReport>& reports) {
    for (const auto& r : reports)
        if (!r.satisfied) return false;
    return true;
}

}  // namespace curveig
