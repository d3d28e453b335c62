#pragma once

#include "curveig/grid.hpp"

#include <string>

namespace curveig {

/// Derived geometry of a support function u: h = Hess u + u I, principal
/// radii/curvatures, trace W, enclosed volume and admissibility flags.
/// Assembly never aborts on inadmissible input; the flags report it.
struct ShapeBundle {
    ScalarField u;
    Eigen::ArrayXXd h;      // size x 1 (S^1) or size x 3 (h11, h12, h22)
    Eigen::ArrayXXd radii;  // eigenvalues of h per node, ascending
    Eigen::ArrayXXd kappa;  // principal curvatures 1/radii
    Eigen::ArrayXd W;       // tr h = Delta u + n u
    double volume = 0;      // support route: (1/(n+1)) int u det h
    double min_eig_h = 0;
    double min_u = 0;
    bool convex = false;
    bool star_shaped = false;
};

/// Geometry of a star-shaped hypersurface X = rho(x) x: induced metric g,
/// second fundamental form h, outward normal nu, support values <X, nu>, and
/// principal curvatures (eigenvalues of h with respect to g).
struct RadialBundle {
    ScalarField rho;
    Eigen::ArrayXXd g;   // size x 1 or size x 3
    Eigen::ArrayXXd h;
    Eigen::MatrixXd nu;  // size x (n+1)
    ScalarField u_of_rho;
    Eigen::ArrayXXd kappa;
    bool star_shaped = false;
};

ShapeBundle bundle_from_support(const ScalarField& u);
RadialBundle bundle_from_radial(const ScalarField& rho);

/// Inverse-Gauss-map embedding X = u x + grad u (tangential lift).
/// Requires a convex bundle.
Eigen::MatrixXd embed_support(const ScalarField& u);

/// Radial function of the convex body with support u, resampled to the grid:
/// rho(x) = min over normals y of u(y)/<x,y>, refined by a local quadratic
/// fit around the discrete argmin.
ScalarField radial_from_support(const ScalarField& u);

/// Support function of the star-shaped body with radial rho:
/// u(y) = max over directions x of rho(x) <x,y>, refined like above.
ScalarField support_from_radial(const ScalarField& rho);

/// (1/(n+1)) int u det(h) over S^n.
double volume_support(const ScalarField& u);

/// (1/(n+1)) int rho^{n+1} over S^n.
double volume_radial(const ScalarField& rho);

/// n=2: Wavefront OBJ triangle mesh of the embedded surface.
void write_obj(const std::string& path, const ScalarField& u);

/// n=1: closed polyline CSV, columns x,y.
void write_polyline_csv(const std::string& path, const ScalarField& u);

}  // namespace curveig
