#pragma once

#include "curveig/grid.hpp"

#include <string>

namespace curveig {

/// Samples a named preset data function onto the grid.
/// Syntax: "constant:c", "harmonic_even:c,eps,axis", "harmonic_odd:c,eps,axis"
/// (axis in {x,y,z}), "band:c,eps,m" with even m. The result must be strictly
/// positive; violations throw std::invalid_argument.
ScalarField preset_function(const std::string& descriptor, const GridPtr& grid);

}  // namespace curveig
