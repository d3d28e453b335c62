#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curveig/solver.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <random>

using namespace curveig;

namespace {

ProblemSpec standard_spec(int n = 2, int k = 1, double p = 3.0, double lambda = 1.0) {
    auto g = n == 1 ? SphereGrid::circle(64) : SphereGrid::sphere(16, 32);
    return spec_from_f(n, k, p, lambda, constant_field(g, 1.0));
}

ScalarField perturbed_sphere(const GridPtr& g, double r, double eps) {
    return make_field(g, [&](const auto& x) {
        return r + eps * x[x.size() - 1] * x[x.size() - 1];
    });
}

}  // namespace

TEST_CASE("spec constructors enforce the data contract") {
    auto g = SphereGrid::sphere(8, 16);
    CHECK_THROWS_AS(spec_from_f(2, 3, 3.0, 1.0, constant_field(g, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(spec_from_f(2, 1, 3.0, -1.0, constant_field(g, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(spec_from_f(2, 1, 3.0, 1.0, constant_field(g, -0.1)),
                    std::invalid_argument);
    const ProblemSpec s = spec_from_psi(2, 1, 3.0, 1.0, constant_field(g, 2.0));
    CHECK((s.f.values * s.psi.values - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("residual closed forms") {
    SUBCASE("round sphere balance: u = 1/2 at n=2, k=1, p=3, f = 1, lambda = 1") {
        const ProblemSpec spec = standard_spec();
        const ScalarField R = residual(constant_field(spec.grid, 0.5), spec);
        CHECK(R.values.abs().maxCoeff() < 1e-13);
    }
    SUBCASE("unit sphere balances when lambda = sigma_k(1,..,1)") {
        for (int n : {1, 2})
            for (int k = 1; k <= n; ++k) {
                const double C = (n == 2 && k == 1) ? 2.0 : 1.0;
                for (double p : {2.7, 3.5}) {
                    if (p <= k + 1) continue;
                    ProblemSpec spec = standard_spec(n, k, p, C);
                    const ScalarField R = residual(constant_field(spec.grid, 1.0), spec);
                    CHECK(R.values.abs().maxCoeff() < 1e-13);
                }
            }
    }
    SUBCASE("degree-1 homogeneity of the residual at p = k+1") {
        ProblemSpec spec = standard_spec(2, 1, 2.0);
        const ScalarField u = perturbed_sphere(spec.grid, 1.0, 0.1);
        const ScalarField R1 = residual(u, spec);
        const ScalarField R2 = residual({spec.grid, 2.0 * u.values}, spec);
        CHECK((R2.values - 2.0 * R1.values).abs().maxCoeff() < 1e-12);
    }
    SUBCASE("inadmissible input raises a cone error with the worst node") {
        const ProblemSpec spec = standard_spec();
        auto bad = make_field(spec.grid, [](const auto& x) { return 0.05 + x[2]; });
        CHECK_THROWS_AS(residual(bad, spec), admissibility_error);
    }
}

TEST_CASE("primal residual cross-validates the support form") {
    SUBCASE("round sphere in radial form") {
        const ProblemSpec spec = standard_spec();
        const RadialBundle b = bundle_from_radial(constant_field(spec.grid, 0.5));
        const ScalarField R = primal_residual(b, spec);
        CHECK(R.values.abs().maxCoeff() < 10 * spec.grid->nominal_error());
    }
    SUBCASE("converted Newton solution has small primal residual") {
        ProblemSpec spec = standard_spec();
        spec.f = make_field(spec.grid, [](const auto& x) { return 1 + 0.1 * x[2] * x[2]; });
        spec.psi = ScalarField{spec.grid, spec.f.values.inverse()};
        const SolveReport rep = newton_solve(spec, sphere_guess(spec));
        REQUIRE(rep.success);
        const RadialBundle b = bundle_from_radial(radial_from_support(rep.u));
        const ScalarField R = primal_residual(b, spec);
        CHECK(R.values.abs().maxCoeff() <
              10 * (spec.grid->nominal_error() + spec.tol_newton));
    }
}

TEST_CASE("jacobian_apply") {
    ProblemSpec spec = standard_spec();
    const ScalarField u = perturbed_sphere(spec.grid, 0.5, 0.03);
    SUBCASE("du = 0 gives 0") {
        const ScalarField L = jacobian_apply(u, constant_field(spec.grid, 0.0), spec);
        CHECK(L.values.abs().maxCoeff() == 0.0);
    }
    SUBCASE("Euler relation at p = k+1: L[u] = R(u), hence 0 at a solution") {
        // F^{ij} h_ij = F (degree-1 homogeneity) makes the linearization
        // applied to u itself reproduce the residual when (p-1)/k = 1.
        ProblemSpec hom = standard_spec(2, 1, 2.0);
        const ScalarField v = perturbed_sphere(hom.grid, 1.0, 0.05);
        const ScalarField L = jacobian_apply(v, v, hom);
        const ScalarField R = residual(v, hom);
        CHECK((L.values - R.values).abs().maxCoeff() < 1e-11);
        // u = 1 solves the p = k+1 problem when lambda = sigma_k(1,..,1) = 2
        ProblemSpec eig = standard_spec(2, 1, 2.0, 2.0);
        const ScalarField one = constant_field(eig.grid, 1.0);
        CHECK(jacobian_apply(one, one, eig).values.abs().maxCoeff() < 1e-12);
    }
    SUBCASE("matches central differences of the residual") {
        // smooth du: a rough (white-noise) du has a grid-scale Hessian and the
        // eps^2 truncation term of the central difference would dominate
        std::mt19937 rng(31);
        std::normal_distribution<> dist;
        Eigen::Vector3d a, b;
        for (int i = 0; i < 3; ++i) { a[i] = dist(rng); b[i] = dist(rng); }
        ScalarField du = make_field(spec.grid, [&](const auto& x) {
            const double s = x.dot(a.transpose());
            const double t = x.dot(b.transpose());
            return s * s - 0.5 * t + 0.3 * s * t;
        });
        du.values /= du.values.abs().maxCoeff();
        const double eps = 1e-6;
        const ScalarField Rp = residual({spec.grid, u.values + eps * du.values}, spec);
        const ScalarField Rm = residual({spec.grid, u.values - eps * du.values}, spec);
        const ScalarField L = jacobian_apply(u, du, spec);
        const double scale = L.values.abs().maxCoeff();
        CHECK(((Rp.values - Rm.values) / (2 * eps) - L.values).abs().maxCoeff() <
              1e-6 * scale);
    }
}

TEST_CASE("assemble_jacobian agrees with jacobian_apply") {
    ProblemSpec spec = standard_spec();
    const ScalarField u = perturbed_sphere(spec.grid, 0.5, 0.04);
    const Eigen::SparseMatrix<double> J = assemble_jacobian(u, spec);
    SUBCASE("row sums reproduce L[1]") {
        const ScalarField L1 = jacobian_apply(u, constant_field(spec.grid, 1.0), spec);
        const Eigen::VectorXd rs = J * Eigen::VectorXd::Ones(J.cols());
        CHECK((rs.array() - L1.values).abs().maxCoeff() < 1e-12);
    }
    SUBCASE("operator-matrix agreement on random du") {
        std::mt19937 rng(37);
        std::normal_distribution<> dist;
        for (int trial = 0; trial < 10; ++trial) {
            ScalarField du{spec.grid, Eigen::ArrayXd(spec.grid->size())};
            for (int i = 0; i < du.size(); ++i) du.values[i] = dist(rng);
            const ScalarField L = jacobian_apply(u, du, spec);
            const Eigen::VectorXd Jdu = J * du.values.matrix();
            CHECK((Jdu.array() - L.values).abs().maxCoeff() < 1e-11);
        }
    }
    SUBCASE("invertible at the round solution for p > k+1") {
        const Eigen::SparseMatrix<double> Js =
            assemble_jacobian(constant_field(spec.grid, 0.5), spec);
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(Js);
        REQUIRE(lu.info() == Eigen::Success);
        // solve J x = e and watch for blow-up: bounded x means nondegenerate
        const Eigen::VectorXd x = lu.solve(Eigen::VectorXd::Ones(Js.cols()));
        CHECK(x.allFinite());
        CHECK(x.norm() < 1e8);
    }
}

TEST_CASE("admissibility report") {
    const ProblemSpec spec = standard_spec();
    SUBCASE("unit sphere") {
        const AdmissibilityReport a = admissibility(constant_field(spec.grid, 1.0), spec);
        CHECK(a.positive);
        CHECK(a.convex);
        CHECK(a.gamma_k);
        CHECK(a.worst_margin == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("near-translated sphere stays convex") {
        auto u = make_field(spec.grid, [](const auto& x) { return 1.0 + 0.95 * x[2]; });
        const AdmissibilityReport a = admissibility(u, spec);
        CHECK(a.positive);
        CHECK(a.convex);
    }
    SUBCASE("sign change is flagged") {
        auto u = make_field(spec.grid, [](const auto& x) { return 0.5 + x[2]; });
        CHECK_FALSE(admissibility(u, spec).positive);
    }
}

TEST_CASE("sphere_guess closed forms") {
    CHECK(sphere_guess(standard_spec(2, 1, 3.0, 1.0)).values[0] ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sphere_guess(standard_spec(2, 1, 3.0, 2.0)).values[0] ==
          doctest::Approx(1.0).epsilon(1e-14));
    ProblemSpec s = standard_spec(2, 1, 4.0, 1.0);
    s.f = constant_field(s.grid, 4.0);
    CHECK(sphere_guess(s).values[0] == doctest::Approx(std::sqrt(0.125)).epsilon(1e-12));
    ProblemSpec eig = standard_spec(2, 1, 2.0, 1.0);
    CHECK_THROWS_AS(sphere_guess(eig), std::invalid_argument);
}

TEST_CASE("newton_solve") {
    SUBCASE("round case from a constant start") {
        ProblemSpec spec = standard_spec();
        const SolveReport rep = newton_solve(spec, constant_field(spec.grid, 0.7));
        REQUIRE(rep.success);
        CHECK(rep.iterations <= 15);
        CHECK((rep.u.values - 0.5).abs().maxCoeff() < 1e-8);
        CHECK(rep.admissible_throughout);
        CHECK(rep.final_residual_sup <= spec.tol_newton);
        // strictly decreasing residual along the accepted path
        for (size_t i = 1; i < rep.newton_path.size(); ++i)
            CHECK(rep.newton_path[i].residual_sup < rep.newton_path[i - 1].residual_sup);
    }
    SUBCASE("perturbed start reaches the same limit") {
        ProblemSpec spec = standard_spec();
        const ScalarField u0 = perturbed_sphere(spec.grid, 0.5, 0.05);
        const SolveReport rep = newton_solve(spec, u0);
        REQUIRE(rep.success);
        CHECK((rep.u.values - 0.5).abs().maxCoeff() < 1e-6);
    }
    SUBCASE("n=1 Monge-Ampere case: unit circle at p=4") {
        ProblemSpec spec = standard_spec(1, 1, 4.0);
        const SolveReport rep = newton_solve(spec, constant_field(spec.grid, 1.4));
        REQUIRE(rep.success);
        CHECK((rep.u.values - 1.0).abs().maxCoeff() < 1e-9);
    }
    SUBCASE("n=2, k=2 Monge-Ampere case") {
        ProblemSpec spec = standard_spec(2, 2, 4.0);
        const SolveReport rep = newton_solve(spec, constant_field(spec.grid, 1.3));
        REQUIRE(rep.success);
        // r^{p-1-k} sigma_2(1,1) = 1 -> r = 1
        CHECK((rep.u.values - 1.0).abs().maxCoeff() < 1e-7);
    }
    SUBCASE("multi-start agreement within 1e-6") {
        ProblemSpec spec = standard_spec();
        spec.f = make_field(spec.grid, [](const auto& x) { return 1 + 0.1 * x[2] * x[2]; });
        spec.psi = ScalarField{spec.grid, spec.f.values.inverse()};
        std::vector<ScalarField> sols;
        for (double eps : {0.0, 0.04, -0.03}) {
            const SolveReport rep =
                newton_solve(spec, perturbed_sphere(spec.grid, 0.48, eps));
            REQUIRE(rep.success);
            sols.push_back(rep.u);
        }
        for (size_t a = 0; a < sols.size(); ++a)
            for (size_t b = a + 1; b < sols.size(); ++b)
                CHECK((sols[a].values - sols[b].values).abs().maxCoeff() < 1e-6);
    }
    SUBCASE("failure reports carry the best iterate instead of throwing") {
        ProblemSpec spec = standard_spec();
        spec.max_iter = 1;
        const SolveReport rep = newton_solve(spec, constant_field(spec.grid, 2.0));
        CHECK_FALSE(rep.success);
        CHECK(!rep.message.empty());
        CHECK(rep.u.values.allFinite());
    }
}
