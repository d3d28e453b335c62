#pragma once

#include "curveig/config.hpp"

namespace curveig {

inline constexpr const char* kVersion = "curveig 1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitBounds = 4;

/// Dispatches the configured mode and writes the artifacts into
/// config.out_dir: report.json always; lambda_table.csv (eigen);
/// shape.obj / shape.csv (meshes); bounds.json (bound suites).
/// Returns one of the kExit* codes; never throws on solver or bound
/// failure (those map to exit codes), but propagates config_error.
int run(const RunConfig& config);

}  // namespace curveig
