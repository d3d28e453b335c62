#include "curveig/presets.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace curveig {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

Eigen::Vector3d parse_axis(const std::string& s, int n) {
    if (s == "x") return {1, 0, 0};
    if (s == "y") return {0, 1, 0};
    if (s == "z") {
        if (n == 1)
            throw std::invalid_argument("preset axis z is not available on S^1");
        return {0, 0, 1};
    }
    throw std::invalid_argument("preset axis must be one of x, y, z: got '" + s + "'");
}

double axis_dot(const SphereGrid& g, int i, const Eigen::Vector3d& axis) {
    double dot = 0;
    for (int c = 0; c <= g.dim(); ++c) dot += axis[c] * g.nodes()(i, c);
    return dot;
}

}  // namespace

ScalarField preset_function(const std::string& descriptor, const GridPtr& grid) {
    const auto colon = descriptor.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("preset must be name:params, got '" + descriptor + "'");
    const std::string name = descriptor.substr(0, colon);
    const auto params = split(descriptor.substr(colon + 1), ',');
    const SphereGrid& g = *grid;
    ScalarField out{grid, Eigen::ArrayXd(g.size())};

    auto num = [&](size_t idx) {
        if (idx >= params.size())
            throw std::invalid_argument("preset '" + name + "': missing parameter");
        size_t pos = 0;
        const double v = std::stod(params[idx], &pos);
        if (pos != params[idx].size())
            throw std::invalid_argument("preset '" + name + "': bad number '" +
                                        params[idx] + "'");
        return v;
    };

    if (name == "constant") {
        out.values.setConstant(num(0));
    } else if (name == "harmonic_even" || name == "harmonic_odd") {
        const double c = num(0), eps = num(1);
        const Eigen::Vector3d axis =
            parse_axis(params.size() > 2 ? params[2] : "z", g.dim());
        for (int i = 0; i < g.size(); ++i) {
            const double dot = axis_dot(g, i, axis);
            out.values[i] =
                name == "harmonic_even" ? c + eps * dot * dot : c + eps * dot;
        }
    } else if (name == "band") {
        const double c = num(0), eps = num(1);
        const int m = static_cast<int>(num(2));
        if (g.dim() != 2)
            throw std::invalid_argument("band preset requires S^2");
        if (m % 2 != 0)
            throw std::invalid_argument("band preset requires even m (evenness)");
        for (int i = 0; i < g.size(); ++i) {
            const double theta = g.coords()(i, 0), phi = g.coords()(i, 1);
            out.values[i] =
                c + eps * std::cos(m * phi) * std::pow(std::sin(theta), m);
        }
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }

    if (out.values.minCoeff() <= 0)
        throw std::invalid_argument("preset '" + descriptor +
                                    "' is not strictly positive on the grid");
    return out;
}

}  // namespace curveig
