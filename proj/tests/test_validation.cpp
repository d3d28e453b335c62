#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curveig/presets.hpp"
#include "curveig/validation.hpp"

#include <cmath>
#include <string>

using namespace curveig;

namespace {

const double kPi = std::acos(-1.0);

BoundReport find_report(const std::vector<BoundReport>& v, const std::string& name) {
    for (const auto& r : v)
        if (r.name == name) return r;
    FAIL("missing report: " << name);
    return {};
}

// Round lambda = 1 solution for f == 1: u == binom(n,k)^{-1/(p-1-k)}.
double round_radius(int n, int k, double p) {
    double c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::pow(c, -1.0 / (p - 1 - k));
}

}  // namespace

TEST_CASE("make_bound_report records slack and the tolerance-relative verdict") {
    const BoundReport a = make_bound_report("a", 1.0, 2.0, "note");
    CHECK(a.satisfied);
    CHECK(a.slack == doctest::Approx(1.0));
    CHECK(a.notes == "note");

    // Equality holds, and a relative 1e-9 allowance is granted beyond it.
    CHECK(make_bound_report("b", 2.0, 2.0).satisfied);
    CHECK(make_bound_report("c", 2.0 + 1e-10 * 2.0, 2.0).satisfied);
    CHECK_FALSE(make_bound_report("d", 2.0 + 1e-8 * 2.0, 2.0).satisfied);
    CHECK_FALSE(make_bound_report("e", 1.0, 0.5).satisfied);
    CHECK(make_bound_report("f", -1.0, 0.0).satisfied);
}

TEST_CASE("volume ratio bound on the round lambda = 1 solution") {
    SUBCASE("n = 2, k = 1: corrected bound is tight, literal bound fails") {
        auto g = SphereGrid::sphere(32, 64);
        const ProblemSpec spec =
            spec_from_f(2, 1, 3.0, 1.0, constant_field(g, 1.0));
        const ScalarField u = constant_field(g, round_radius(2, 1, 3.0));
        const auto reports = check_volume_ratio(u, spec);
        REQUIRE(reports.size() == 2);
        const BoundReport lo = find_report(reports, "volume_ratio_lower");
        const BoundReport hi = find_report(reports, "volume_ratio_upper");
        CHECK(lo.satisfied);
        CHECK(hi.satisfied);
        // (V / V_ball)^{(p-k-1)/(n+1)} = r = 1/2 exactly; with exact cell-area
        // weights the quadrature ratio cancels, so both sides collapse.
        CHECK(std::abs(lo.slack) < 1e-10);
        CHECK(std::abs(hi.slack) < 1e-10);
        CHECK(lo.rhs == doctest::Approx(0.5).epsilon(1e-10));
        // Without the sigma_k(1,..,1) = 2 correction the interval is [1, 1].
        CHECK(lo.notes.find("(literal fails)") != std::string::npos);
        CHECK(hi.notes.find("(literal fails)") != std::string::npos);
    }
    SUBCASE("n = 1: the binomial constant is 1, so the literal bound holds") {
        auto g = SphereGrid::circle(128);
        const ProblemSpec spec =
            spec_from_f(1, 1, 4.0, 1.0, constant_field(g, 1.0));
        const ScalarField u = constant_field(g, 1.0);
        const auto reports = check_volume_ratio(u, spec);
        CHECK(all_satisfied(reports));
        CHECK(reports[0].notes.find("(literal holds)") != std::string::npos);
    }
}

TEST_CASE("volume ratio bound on a solved non-round body") {
    auto g = SphereGrid::sphere(24, 48);
    ProblemSpec spec =
        spec_from_f(2, 1, 3.0, 1.0, preset_function("harmonic_even:1,0.1,z", g));
    const SolveReport sr = newton_solve(spec, sphere_guess(spec));
    REQUIRE(sr.success);
    const auto reports = check_volume_ratio(sr.u, spec);
    CHECK(all_satisfied(reports));
    // f is non-constant, so both corrected inequalities are strict.
    for (const auto& r : reports) CHECK(r.slack > 1e-4);
}

TEST_CASE("max-u chain on the round solution and a perturbed solve") {
    auto g = SphereGrid::sphere(24, 48);
    SUBCASE("round body: every link of the chain holds") {
        const ProblemSpec spec =
            spec_from_f(2, 1, 3.0, 1.0, constant_field(g, 1.0));
        const ScalarField u = constant_field(g, 0.5);
        const auto reports = check_max_u_chain(u, spec);
        REQUIRE(reports.size() == 3);
        CHECK(all_satisfied(reports));
        const BoundReport vc = find_report(reports, "volume_chain");
        CHECK(vc.notes.find("p* = 5") != std::string::npos);
        const BoundReport mu = find_report(reports, "max_u");
        CHECK(mu.lhs == doctest::Approx(0.5));
        CHECK(mu.rhs >= 0.5);
    }
    SUBCASE("half-sphere moment decreases in the exponent p*") {
        // I(p) = 2 pi / (p + 1) on S^2; the chain only ever increases p*,
        // which shrinks the moment, so both reported moments obey that law.
        const ProblemSpec s3 = spec_from_f(2, 1, 3.0, 1.0, constant_field(g, 1.0));
        const ProblemSpec s4 = spec_from_f(2, 1, 4.0, 1.0, constant_field(g, 1.0));
        const ScalarField u = constant_field(g, 0.5);
        auto moment_of = [&](const ProblemSpec& s) {
            const BoundReport r = find_report(check_max_u_chain(u, s),
                                              "halfsphere_moment");
            const auto pos = r.notes.find("= ");
            REQUIRE(pos != std::string::npos);
            return std::stod(r.notes.substr(pos + 2));
        };
        const double m3 = moment_of(s3);  // p* = 5
        const double m4 = moment_of(s4);  // p* = 7
        CHECK(m3 == doctest::Approx(2 * kPi / 6.0).epsilon(2e-2));
        CHECK(m4 == doctest::Approx(2 * kPi / 8.0).epsilon(2e-2));
        CHECK(m4 < m3);
    }
    SUBCASE("perturbed solved body") {
        ProblemSpec spec = spec_from_f(
            2, 1, 3.0, 1.0, preset_function("harmonic_even:1,0.1,z", g));
        const SolveReport sr = newton_solve(spec, sphere_guess(spec));
        REQUIRE(sr.success);
        CHECK(all_satisfied(check_max_u_chain(sr.u, spec)));
    }
}

TEST_CASE("gradient bound") {
    auto g = SphereGrid::sphere(24, 48);
    SUBCASE("round body has zero gradient") {
        const BoundReport r = check_gradient_bound(constant_field(g, 0.5));
        CHECK(r.satisfied);
        CHECK(r.lhs < 1e-10);
    }
    SUBCASE("translated sphere: |grad u| = |c| <= r + |c| = max u") {
        auto u = make_field(g, [](const auto& x) { return 1.0 + 0.3 * x[2]; });
        const BoundReport r = check_gradient_bound(u);
        CHECK(r.satisfied);
        // The pole-offset latitudes never sample the equator exactly, so the
        // discrete sup lands slightly below |c| = 0.3.
        CHECK(r.lhs == doctest::Approx(0.3).epsilon(1e-2));
        CHECK(r.lhs <= 0.3);
        CHECK(r.rhs >= 1.3);
    }
    SUBCASE("solver output") {
        ProblemSpec spec = spec_from_f(
            2, 1, 3.0, 1.0, preset_function("harmonic_even:1,0.1,z", g));
        const SolveReport sr = newton_solve(spec, sphere_guess(spec));
        REQUIRE(sr.success);
        CHECK(check_gradient_bound(sr.u).satisfied);
    }
}

TEST_CASE("mean-curvature-trace bound W <= 2n(p-1)/k (max u)^{(p-1)/k} ||f^{1/k}||") {
    SUBCASE("round n = 2 plug-in: W = 1 against rhs = 2") {
        auto g = SphereGrid::sphere(24, 48);
        const ProblemSpec spec =
            spec_from_f(2, 1, 3.0, 1.0, constant_field(g, 1.0));
        const BoundReport r = check_W_bound(constant_field(g, 0.5), spec);
        CHECK(r.satisfied);
        CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(r.rhs == doctest::Approx(2.0).epsilon(1e-8));
    }
    SUBCASE("n = 1 round body") {
        auto g = SphereGrid::circle(128);
        const ProblemSpec spec =
            spec_from_f(1, 1, 4.0, 1.0, constant_field(g, 1.0));
        const BoundReport r = check_W_bound(constant_field(g, 1.0), spec);
        CHECK(r.satisfied);
        CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(r.rhs == doctest::Approx(6.0).epsilon(1e-8));
    }
    SUBCASE("perturbed f on a solved body") {
        auto g = SphereGrid::sphere(24, 48);
        ProblemSpec spec = spec_from_f(
            2, 1, 3.0, 1.0, preset_function("harmonic_even:1,0.1,z", g));
        const SolveReport sr = newton_solve(spec, sphere_guess(spec));
        REQUIRE(sr.success);
        const BoundReport r = check_W_bound(sr.u, spec);
        CHECK(r.satisfied);
        CHECK(r.notes.find("surrogate norm") != std::string::npos);
    }
}

TEST_CASE("lambda brackets along the continuation") {
    auto g = SphereGrid::sphere(24, 48);
    SUBCASE("constant psi: the bracket collapses onto lambda_p") {
        const ProblemSpec spec =
            spec_from_psi(2, 1, 2.0, 1.0, constant_field(g, 1.0));
        const EigenReport rep =
            continuation_eigen(spec, ContinuationSchedule::geometric(1));
        REQUIRE(rep.success);
        const auto reports = check_lambda_bounds(rep, spec);
        REQUIRE(reports.size() == 2 * rep.lambda_list.size());
        CHECK(all_satisfied(reports));
        for (const auto& r : reports) {
            // Both sides equal C * Vb^{-x/(n+1)} up to the 1e-6 guard band.
            CHECK(std::abs(r.slack) < 2e-6 * std::abs(r.rhs) + 1e-12);
            CHECK(r.notes.find("unit-ball volume") != std::string::npos);
        }
    }
    SUBCASE("psi in [1, 1.1]: every lambda_p sits inside the corrected bracket") {
        const ProblemSpec spec = spec_from_psi(
            2, 1, 2.0, 1.0, preset_function("harmonic_even:1,0.1,z", g));
        const EigenReport rep =
            continuation_eigen(spec, ContinuationSchedule::geometric(1));
        REQUIRE(rep.success);
        CHECK(all_satisfied(check_lambda_bounds(rep, spec)));
    }
}

TEST_CASE("solution property checks") {
    auto g = SphereGrid::sphere(24, 48);
    SUBCASE("even data: convexity, symmetry, and multi-start agreement") {
        ProblemSpec spec = spec_from_f(
            2, 1, 3.0, 1.0, preset_function("harmonic_even:1,0.1,z", g));
        const SolveReport sr = newton_solve(spec, sphere_guess(spec));
        REQUIRE(sr.success);
        const auto reports = check_solution_properties(sr.u, spec, 7u);
        REQUIRE(reports.size() == 3);
        CHECK(all_satisfied(reports));
        CHECK(find_report(reports, "convexity_margin").rhs > 0.1);
        CHECK(find_report(reports, "symmetry_defect").lhs < 1e-8);
        const BoundReport ms = find_report(reports, "multi_start_agreement");
        CHECK(ms.lhs < 1e-6);
        CHECK(ms.notes.find("three perturbed starts") != std::string::npos);

        // Same seed reproduces the same numbers bit for bit.
        const auto again = check_solution_properties(sr.u, spec, 7u);
        CHECK(again.back().lhs == ms.lhs);
    }
    SUBCASE("non-even data skips the symmetry check but stays green") {
        ProblemSpec spec = spec_from_f(
            2, 1, 3.0, 1.0, preset_function("harmonic_odd:1,0.1,z", g));
        const SolveReport sr = newton_solve(spec, sphere_guess(spec));
        REQUIRE(sr.success);
        const auto reports = check_solution_properties(sr.u, spec, 11u);
        const BoundReport sym = find_report(reports, "symmetry_defect");
        CHECK(sym.satisfied);
        CHECK(sym.notes.find("skipped") != std::string::npos);
        CHECK(all_satisfied(reports));
    }
}

TEST_CASE("eigen property checks") {
    SUBCASE("even psi: symmetry recorded and lambda_0 schedule independent") {
        auto g = SphereGrid::sphere(24, 48);
        const ProblemSpec spec = spec_from_psi(
            2, 1, 2.0, 1.0, preset_function("harmonic_even:1,0.1,z", g));
        const EigenReport rep =
            continuation_eigen(spec, ContinuationSchedule::geometric(1));
        REQUIRE(rep.success);
        const auto reports = check_eigen_properties(rep, spec);
        REQUIRE(reports.size() == 3);
        CHECK(all_satisfied(reports));
        CHECK(find_report(reports, "symmetry_defect").lhs < 1e-8);
        const BoundReport sched = find_report(reports, "schedule_independence");
        CHECK(sched.lhs < 2e-3);
        CHECK(sched.notes.find("base-2 vs base-3") != std::string::npos);
    }
    SUBCASE("non-even psi skips the symmetry check") {
        auto g = SphereGrid::sphere(16, 32);
        const ProblemSpec spec = spec_from_psi(
            2, 1, 2.0, 1.0, preset_function("harmonic_odd:1,0.1,z", g));
        const EigenReport rep =
            continuation_eigen(spec, ContinuationSchedule::geometric(1, 5));
        REQUIRE(rep.success);
        const auto reports = check_eigen_properties(rep, spec);
        const BoundReport sym = find_report(reports, "symmetry_defect");
        CHECK(sym.satisfied);
        CHECK(sym.notes.find("skipped") != std::string::npos);
    }
}

TEST_CASE("all_satisfied") {
    std::vector<BoundReport> v;
    CHECK(all_satisfied(v));
    v.push_back(make_bound_report("ok", 0.0, 1.0));
    CHECK(all_satisfied(v));
    v.push_back(make_bound_report("bad", 2.0, 1.0));
    CHECK_FALSE(all_satisfied(v));
}
