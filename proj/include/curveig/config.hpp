#pragma once

#include <stdexcept>
#include <string>

namespace curveig {

enum class RunMode { solve, eigen, flow, validate };

/// Parsed and validated run configuration. Flat key = value text with '#'
/// comments; keys use section prefixes (problem., grid., solver., schedule.,
/// flow., output., validate.). Unknown keys are rejected.
struct RunConfig {
    RunMode mode = RunMode::solve;

    int n = 2;
    int k = 1;
    double p = 3.0;
    double lambda = 1.0;
    std::string f;    // preset descriptor (solve/flow modes)
    std::string psi;  // preset descriptor (eigen mode; f = 1/psi)

    int grid_n = 256;       // S^1
    int n_theta = 48;       // S^2
    int n_phi = 96;

    double tol_newton = 0;  // 0 -> module default
    int max_iter = 60;
    double margin = 0.1;

    int schedule_steps = 8;
    double schedule_base = 2.0;

    double flow_t_max = 50.0;
    double flow_stop_tol = 1e-6;

    std::string out_dir = ".";
    unsigned seed = 1;
    std::string solution_path;  // validate mode: stored report to replay

    bool allow_non_even = false;

    std::string echo;  // original config text, embedded in reports
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses the config text for the given mode. Throws config_error with a line
/// number on parse failure, or with the violated constraint on invariant
/// failure.
RunConfig parse_config(const std::string& text, RunMode mode);

RunConfig load_config(const std::string& path, RunMode mode);

}  // namespace curveig
