#include "curveig/run.hpp"

#include "curveig/continuation.hpp"
#include "curveig/flow.hpp"
#include "curveig/presets.hpp"
#include "curveig/shape.hpp"
#include "curveig/validation.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace curveig {

namespace {

using json = nlohmann::ordered_json;

GridPtr build_grid(const RunConfig& c) {
    return c.n == 1 ? SphereGrid::circle(c.grid_n)
                    : SphereGrid::sphere(c.n_theta, c.n_phi);
}

void apply_solver_knobs(ProblemSpec& spec, const RunConfig& c) {
    if (c.tol_newton > 0) spec.tol_newton = c.tol_newton;
    spec.max_iter = c.max_iter;
    spec.margin = c.margin;
}

json grid_json(const GridPtr& g) {
    json j;
    j["dim"] = g->dim();
    if (g->dim() == 1) {
        j["n_nodes"] = g->size();
    } else {
        j["n_theta"] = g->n_theta();
        j["n_phi"] = g->n_phi();
    }
    return j;
}

json header_json(const RunConfig& c, const char* mode) {
    json j;
    j["version"] = kVersion;
    j["mode"] = mode;
    j["config_echo"] = c.echo;
    j["grid"] = grid_json(build_grid(c));
    j["seed"] = c.seed;
    return j;
}

json bound_json(const BoundReport& b) {
    json j;
    j["name"] = b.name;
    j["lhs"] = b.lhs;
    j["rhs"] = b.rhs;
    j["satisfied"] = b.satisfied;
    j["slack"] = b.slack;
    j["notes"] = b.notes;
    return j;
}

json bounds_json(const std::vector<BoundReport>& reports) {
    json arr = json::array();
    for (const auto& b : reports) arr.push_back(bound_json(b));
    return arr;
}

std::vector<double> to_vector(const Eigen::ArrayXd& a) {
    return std::vector<double>(a.data(), a.data() + a.size());
}

/// Everything needed to reconstruct the problem and replay the bound suite.
json solution_json(const ScalarField& u, const ProblemSpec& spec,
                   const std::string& f_descriptor) {
    json j;
    j["n"] = spec.n;
    j["k"] = spec.k;
    j["p"] = spec.p;
    j["lambda"] = spec.lambda;
    j["f"] = f_descriptor;
    j["grid"] = grid_json(u.grid);
    j["u"] = to_vector(u.values);
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

void write_shape(const std::filesystem::path& dir, const ScalarField& u) {
    if (u.grid->dim() == 2)
        write_obj((dir / "shape.obj").string(), u);
    else
        write_polyline_csv((dir / "shape.csv").string(), u);
}

/// Structural checks usable at any (p, lambda), including the eigen limit
/// where the multi-start solve would be degenerate.
std::vector<BoundReport> basic_shape_checks(const ScalarField& u, bool even_data) {
    std::vector<BoundReport> out;
    const ShapeBundle b = bundle_from_support(u);
    out.push_back(make_bound_report("convexity_margin", 0.0, b.min_eig_h,
                                    "satisfied iff min eig(h) > 0"));
    if (even_data) {
        const double defect =
            (u.values - antipodal_reflect(u).values).abs().maxCoeff();
        out.push_back(make_bound_report("symmetry_defect", defect, 1e-4));
    } else {
        BoundReport skip = make_bound_report("symmetry_defect", 0.0, 0.0);
        skip.notes = "skipped: data is not even, origin symmetry not expected";
        out.push_back(skip);
    }
    out.push_back(check_gradient_bound(u));
    return out;
}

bool is_even(const ScalarField& f) {
    return (f.values - antipodal_reflect(f).values).abs().maxCoeff() <= 1e-12;
}

int run_solve(const RunConfig& c, const std::filesystem::path& dir) {
    const GridPtr grid = build_grid(c);
    ProblemSpec spec = spec_from_f(c.n, c.k, c.p, c.lambda,
                                   preset_function(c.f, grid));
    apply_solver_knobs(spec, c);

    const SolveReport solve = newton_solve(spec, sphere_guess(spec));

    json report = header_json(c, "solve");
    report["solve"]["success"] = solve.success;
    report["solve"]["iterations"] = solve.iterations;
    report["solve"]["final_residual_sup"] = solve.final_residual_sup;
    report["solve"]["admissible_throughout"] = solve.admissible_throughout;
    report["solve"]["message"] = solve.message;
    json path = json::array();
    for (const auto& s : solve.newton_path)
        path.push_back({{"step", s.step},
                        {"damping", s.damping},
                        {"residual_sup", s.residual_sup}});
    report["solve"]["newton_path"] = path;
    report["solution"] = solution_json(solve.u, spec, c.f);

    if (!solve.success) {
        write_json(dir / "report.json", report);
        std::cerr << "solver failure: " << solve.message << "\n";
        return kExitSolver;
    }

    std::vector<BoundReport> bounds =
        check_solution_properties(solve.u, spec, c.seed);
    bounds.push_back(check_gradient_bound(solve.u));
    if (spec.lambda == 1.0) {
        for (auto& b : check_volume_ratio(solve.u, spec)) bounds.push_back(b);
        for (auto& b : check_max_u_chain(solve.u, spec)) bounds.push_back(b);
        bounds.push_back(check_W_bound(solve.u, spec));
    }
    report["bounds_satisfied"] = all_satisfied(bounds);

    write_json(dir / "report.json", report);
    write_json(dir / "bounds.json", bounds_json(bounds));
    write_shape(dir, solve.u);
    return all_satisfied(bounds) ? kExitOk : kExitBounds;
}

int run_eigen(const RunConfig& c, const std::filesystem::path& dir) {
    const GridPtr grid = build_grid(c);
    const ScalarField psi = preset_function(c.psi, grid);
    const bool even = is_even(psi);
    if (!even && !c.allow_non_even)
        throw config_error(
            "psi is not even; pass --allow-non-even to proceed (existence is "
            "then not covered by the even-data theorem)");

    ProblemSpec spec = spec_from_psi(c.n, c.k, c.k + 1.0, 1.0, psi);
    apply_solver_knobs(spec, c);
    const auto schedule = ContinuationSchedule::geometric(
        c.k, c.schedule_steps, c.schedule_base);
    const EigenReport eig = continuation_eigen(spec, schedule);

    json report = header_json(c, "eigen");
    report["eigen"]["success"] = eig.success;
    report["eigen"]["message"] = eig.message;
    report["eigen"]["lambda0"] = eig.lambda0;
    report["eigen"]["final_residual"] = eig.final_residual;
    report["eigen"]["symmetry_defect"] = eig.symmetry_defect;
    report["eigen"]["p_list"] = eig.p_list;
    report["eigen"]["lambda_list"] = eig.lambda_list;
    report["eigen"]["volume_list"] = eig.volume_list;
    report["eigen"]["residual_list"] = eig.residual_list;
    report["eigen"]["existence_guaranteed"] = even;
    if (!even)
        report["eigen"]["existence_note"] =
            "psi is not even: uniqueness holds but the existence theorem "
            "assumes even data";
    if (eig.success) {
        ProblemSpec limit = spec;
        limit.lambda = eig.lambda0 > 0 ? eig.lambda0 : 1.0;
        json sol = solution_json(eig.u0, limit, "");
        sol.erase("f");
        sol["psi"] = c.psi;
        report["solution"] = sol;
    }

    if (!eig.success) {
        write_json(dir / "report.json", report);
        std::cerr << "continuation failure: " << eig.message << "\n";
        return kExitSolver;
    }

    std::ostringstream csv;
    csv << "p,lambda_p,V,residual,symmetry_defect\n";
    csv.precision(17);
    for (size_t j = 0; j < eig.p_list.size(); ++j)
        csv << eig.p_list[j] << ',' << eig.lambda_list[j] << ','
            << eig.volume_list[j] << ',' << eig.residual_list[j] << ','
            << eig.symmetry_defect_list[j] << '\n';
    write_text(dir / "lambda_table.csv", csv.str());

    std::vector<BoundReport> bounds = check_lambda_bounds(eig, spec);
    for (auto& b : check_eigen_properties(eig, spec)) bounds.push_back(b);
    if (!even) {
        // Replace the symmetry check with an explicit skip marker.
        for (auto& b : bounds)
            if (b.name == "symmetry_defect") {
                b.satisfied = true;
                b.notes = "skipped: data is not even";
            }
    }
    report["bounds_satisfied"] = all_satisfied(bounds);

    write_json(dir / "report.json", report);
    write_json(dir / "bounds.json", bounds_json(bounds));
    write_shape(dir, eig.u0);
    return all_satisfied(bounds) ? kExitOk : kExitBounds;
}

int run_flow(const RunConfig& c, const std::filesystem::path& dir) {
    const GridPtr grid = build_grid(c);
    ProblemSpec spec = spec_from_f(c.n, c.k, c.p, c.lambda,
                                   preset_function(c.f, grid));
    apply_solver_knobs(spec, c);

    FlowResult flow;
    try {
        flow = flow_run(spec, sphere_guess(spec), c.flow_t_max, c.flow_stop_tol);
    } catch (const std::exception& e) {
        std::cerr << "flow failure: " << e.what() << "\n";
        return kExitSolver;
    }

    json report = header_json(c, "flow");
    report["flow"]["converged"] = flow.converged;
    report["flow"]["steps"] = flow.steps;
    report["flow"]["t_final"] = flow.state.t;
    report["flow"]["residual"] = flow.residual;
    report["flow"]["lambda"] = flow.lambda;
    json hist = json::array();
    for (const auto& s : flow.state.history)
        hist.push_back({{"t", s[0]}, {"volume", s[1]}, {"residual", s[2]}});
    report["flow"]["history"] = hist;
    if (flow.converged) {
        ProblemSpec at_one = spec;
        at_one.lambda = 1.0;
        report["solution"] = solution_json(flow.u_lambda1, at_one, c.f);
    }

    write_json(dir / "report.json", report);
    write_shape(dir, flow.converged ? flow.u_lambda1 : flow.state.u);
    return kExitOk;
}

int run_validate(const RunConfig& c, const std::filesystem::path& dir) {
    std::ifstream in(c.solution_path);
    if (!in)
        throw config_error("validate.solution: cannot open " + c.solution_path);
    json stored;
    try {
        stored = json::parse(in);
    } catch (const std::exception& e) {
        throw config_error(std::string("validate.solution: bad JSON: ") + e.what());
    }
    if (!stored.contains("solution"))
        throw config_error("validate.solution: report has no \"solution\" entry");
    const json& sol = stored["solution"];

    const int n = sol.at("n").get<int>();
    const json& gj = sol.at("grid");
    const GridPtr grid = n == 1
        ? SphereGrid::circle(gj.at("n_nodes").get<int>())
        : SphereGrid::sphere(gj.at("n_theta").get<int>(), gj.at("n_phi").get<int>());
    const auto uvals = sol.at("u").get<std::vector<double>>();
    if (static_cast<int>(uvals.size()) != grid->size())
        throw config_error("validate.solution: u length does not match grid");
    ScalarField u{grid, Eigen::Map<const Eigen::ArrayXd>(uvals.data(),
                                                         uvals.size())};
    const int k = sol.at("k").get<int>();
    const double p = sol.at("p").get<double>();
    const double lambda = sol.at("lambda").get<double>();
    ProblemSpec spec = sol.contains("psi")
        ? spec_from_psi(n, k, p, lambda,
                        preset_function(sol.at("psi").get<std::string>(), grid))
        : spec_from_f(n, k, p, lambda,
                      preset_function(sol.at("f").get<std::string>(), grid));
    apply_solver_knobs(spec, c);

    std::vector<BoundReport> bounds = basic_shape_checks(u, is_even(spec.f));
    if (spec.lambda == 1.0 && spec.p > spec.k + 1) {
        for (auto& b : check_volume_ratio(u, spec)) bounds.push_back(b);
        for (auto& b : check_max_u_chain(u, spec)) bounds.push_back(b);
        bounds.push_back(check_W_bound(u, spec));
    }

    json report = header_json(c, "validate");
    report["validated"] = c.solution_path;
    report["bounds_satisfied"] = all_satisfied(bounds);
    write_json(dir / "report.json", report);
    write_json(dir / "bounds.json", bounds_json(bounds));
    return all_satisfied(bounds) ? kExitOk : kExitBounds;
}

}  // namespace

int run(const RunConfig& config) {
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    switch (config.mode) {
        case RunMode::solve: return run_solve(config, dir);
        case RunMode::eigen: return run_eigen(config, dir);
        case RunMode::flow: return run_flow(config, dir);
        case RunMode::validate: return run_validate(config, dir);
    }
    return kExitConfig;
}

}  // namespace curveig
