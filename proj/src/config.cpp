#include "curveig/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace curveig {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

int to_int(const std::string& v, const std::string& key, int line) {
    try {
        size_t pos;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw config_error("line " + std::to_string(line) + ": key '" + key +
                           "' expects an integer, got '" + v + "'");
    }
}

double to_double(const std::string& v, const std::string& key, int line) {
    try {
        size_t pos;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw config_error("line " + std::to_string(line) + ": key '" + key +
                           "' expects a number, got '" + v + "'");
    }
}

}  // namespace

RunConfig parse_config(const std::string& text, RunMode mode) {
    RunConfig c;
    c.mode = mode;
    c.echo = text;
    bool p_given = false;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::set<std::string> seen;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) +
                               ": expected key = value, got '" + trim(raw) + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!seen.insert(key).second)
            throw config_error("line " + std::to_string(lineno) + ": duplicate key '" +
                               key + "'");

        if (key == "problem.n") c.n = to_int(val, key, lineno);
        else if (key == "problem.k") c.k = to_int(val, key, lineno);
        else if (key == "problem.p") { c.p = to_double(val, key, lineno); p_given = true; }
        else if (key == "problem.lambda") c.lambda = to_double(val, key, lineno);
        else if (key == "problem.f") c.f = val;
        else if (key == "problem.psi") c.psi = val;
        else if (key == "grid.N") c.grid_n = to_int(val, key, lineno);
        else if (key == "grid.n_theta") c.n_theta = to_int(val, key, lineno);
        else if (key == "grid.n_phi") c.n_phi = to_int(val, key, lineno);
        else if (key == "solver.tol_newton") c.tol_newton = to_double(val, key, lineno);
        else if (key == "solver.max_iter") c.max_iter = to_int(val, key, lineno);
        else if (key == "solver.margin") c.margin = to_double(val, key, lineno);
        else if (key == "schedule.steps") c.schedule_steps = to_int(val, key, lineno);
        else if (key == "schedule.base") c.schedule_base = to_double(val, key, lineno);
        else if (key == "flow.t_max") c.flow_t_max = to_double(val, key, lineno);
        else if (key == "flow.stop_tol") c.flow_stop_tol = to_double(val, key, lineno);
        else if (key == "output.dir") c.out_dir = val;
        else if (key == "seed") c.seed = static_cast<unsigned>(to_int(val, key, lineno));
        else if (key == "validate.solution") c.solution_path = val;
        else
            throw config_error("line " + std::to_string(lineno) + ": unknown key '" +
                               key + "'");
    }

    if (c.n < 1 || c.n > 2 || c.k < 1 || c.k > c.n)
        throw config_error("1 <= k <= n <= 2 required, got n = " + std::to_string(c.n) +
                           ", k = " + std::to_string(c.k));
    if (mode == RunMode::eigen) {
        if (c.k >= c.n)
            throw config_error(
                "k < n required by the eigenvalue theorem in eigen mode; "
                "k = n is allowed in solve mode");
        if (p_given && std::abs(c.p - (c.k + 1)) > 0)
            throw config_error("eigen mode fixes p = k + 1");
        c.p = c.k + 1;
        if (c.psi.empty()) c.psi = "constant:1";
        if (!c.f.empty())
            throw config_error("eigen mode takes problem.psi (f = 1/psi is derived)");
    } else {
        if (!c.f.empty() && !c.psi.empty())
            throw config_error("give either problem.f or problem.psi, not both");
        if (c.f.empty() && c.psi.empty()) c.f = "constant:1";
        if ((mode == RunMode::solve || mode == RunMode::flow) && c.p <= c.k + 1)
            throw config_error("p > k + 1 required in solve/flow mode");
    }
    if (mode == RunMode::validate && c.solution_path.empty())
        throw config_error("validate mode requires validate.solution = <report.json>");
    if (c.lambda <= 0) throw config_error("problem.lambda must be positive");
    if (c.max_iter < 1) throw config_error("solver.max_iter must be >= 1");
    if (c.schedule_steps < 1 || c.schedule_base <= 1)
        throw config_error("schedule.steps >= 1 and schedule.base > 1 required");
    return c;
}

RunConfig load_config(const std::string& path, RunMode mode) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), mode);
}

}  // namespace curveig
