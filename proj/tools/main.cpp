#include "curveig/run.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Common {
    std::string config_path;
    std::string out_dir;
    bool allow_non_even = false;
};

void add_common(CLI::App* sub, Common& opts) {
    sub->add_option("--config", opts.config_path, "config file (key = value)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "output directory (overrides config)");
    sub->add_flag("--allow-non-even", opts.allow_non_even,
                  "permit non-even data in eigen mode");
}

int dispatch(const Common& opts, curveig::RunMode mode) {
    curveig::RunConfig config = curveig::load_config(opts.config_path, mode);
    if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
    config.allow_non_even = config.allow_non_even || opts.allow_non_even;
    return curveig::run(config);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prescribed sigma_k curvature problems on S^1 and S^2"};
    app.require_subcommand(1);

    Common opts;
    curveig::RunMode mode = curveig::RunMode::solve;
    for (auto [name, m, help] :
         {std::tuple{"solve", curveig::RunMode::solve,
                     "solve the curvature equation at fixed (p, lambda)"},
          std::tuple{"eigen", curveig::RunMode::eigen,
                     "eigenvalue problem via continuation p -> k+1"},
          std::tuple{"flow", curveig::RunMode::flow,
                     "normalized curvature flow cross-check"},
          std::tuple{"validate", curveig::RunMode::validate,
                     "replay the bound suite on a stored report"}}) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, opts);
        sub->callback([&mode, m] { mode = m; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return dispatch(opts, mode);
    } catch (const curveig::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return curveig::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return curveig::kExitSolver;
    }
}
