#include "curveig/shape.hpp"
#include "curveig/symfun.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace curveig {

namespace {

// Eigenvalues (ascending) of the symmetric 2x2 [a b; b c].
inline void eig2(double a, double b, double c, double& lo, double& hi) {
    const double mean = 0.5 * (a + c);
    const double rad = std::hypot(0.5 * (a - c), b);
    lo = mean - rad;
    hi = mean + rad;
}

inline Eigen::Vector3d frame_theta(double theta, double phi) {
    return {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi),
            -std::sin(theta)};
}

inline Eigen::Vector3d frame_phi(double phi) {
    return {-std::sin(phi), std::cos(phi), 0.0};
}

}  // namespace

ShapeBundle bundle_from_support(const ScalarField& u) {
    const SphereGrid& g = *u.grid;
    const int m = g.size(), n = g.dim();
    ShapeBundle b;
    b.u = u;
    const Eigen::ArrayXXd hess = covariant_hessian(u);
    b.radii.resize(m, n);
    b.kappa.resize(m, n);
    b.W.resize(m);
    if (n == 1) {
        b.h = hess.col(0) + u.values;
        b.radii.col(0) = b.h.col(0);
        b.W = b.h.col(0);
    } else {
        b.h.resize(m, 3);
        b.h.col(0) = hess.col(0) + u.values;
        b.h.col(1) = hess.col(1);
        b.h.col(2) = hess.col(2) + u.values;
        for (int i = 0; i < m; ++i) {
            double lo, hi;
            eig2(b.h(i, 0), b.h(i, 1), b.h(i, 2), lo, hi);
            b.radii(i, 0) = lo;
            b.radii(i, 1) = hi;
        }
        b.W = b.h.col(0) + b.h.col(2);
    }
    for (int i = 0; i < m; ++i)
        for (int c = 0; c < n; ++c)
            b.kappa(i, c) = 1.0 / b.radii(i, c);
    b.min_eig_h = b.radii.col(0).minCoeff();
    b.min_u = u.values.minCoeff();
    b.convex = b.min_eig_h > 0;
    b.star_shaped = b.convex && b.min_u > 0;
    b.volume = volume_support(u);
    return b;
}

RadialBundle bundle_from_radial(const ScalarField& rho) {
    const SphereGrid& g = *rho.grid;
    const int m = g.size(), n = g.dim();
    if (rho.values.minCoeff() <= 0)
        throw std::invalid_argument("bundle_from_radial: rho must be positive");
    RadialBundle b;
    b.rho = rho;
    const Eigen::ArrayXXd grad = covariant_gradient(rho);
    const Eigen::ArrayXXd hess = covariant_hessian(rho);
    b.nu.resize(m, n + 1);
    b.u_of_rho = ScalarField{rho.grid, Eigen::ArrayXd(m)};
    b.kappa.resize(m, n);
    if (n == 1) {
        b.g.resize(m, 1);
        b.h.resize(m, 1);
        for (int i = 0; i < m; ++i) {
            const double r = rho.values[i], r1 = grad(i, 0), r11 = hess(i, 0);
            const double w2 = r * r + r1 * r1;
            const double sw = std::sqrt(w2);
            b.g(i, 0) = w2;
            b.h(i, 0) = (r * r + 2 * r1 * r1 - r * r11) / sw;
            b.kappa(i, 0) = b.h(i, 0) / b.g(i, 0);
            b.u_of_rho.values[i] = r * r / sw;
            const double t = g.coords()(i, 0);
            const Eigen::Vector2d x(std::cos(t), std::sin(t));
            const Eigen::Vector2d et(-std::sin(t), std::cos(t));
            const Eigen::Vector2d nu = (r * x - r1 * et) / sw;
            b.nu(i, 0) = nu.x();
            b.nu(i, 1) = nu.y();
        }
    } else {
        b.g.resize(m, 3);
        b.h.resize(m, 3);
        for (int i = 0; i < m; ++i) {
            const double r = rho.values[i];
            const double r1 = grad(i, 0), r2 = grad(i, 1);
            const double w2 = r * r + r1 * r1 + r2 * r2;
            const double sw = std::sqrt(w2);
            b.g(i, 0) = r * r + r1 * r1;
            b.g(i, 1) = r1 * r2;
            b.g(i, 2) = r * r + r2 * r2;
            b.h(i, 0) = (r * r + 2 * r1 * r1 - r * hess(i, 0)) / sw;
            b.h(i, 1) = (2 * r1 * r2 - r * hess(i, 1)) / sw;
            b.h(i, 2) = (r * r + 2 * r2 * r2 - r * hess(i, 2)) / sw;
            // eigenvalues of h with respect to g: det(h - kappa g) = 0
            const double a = b.g(i, 0) * b.g(i, 2) - b.g(i, 1) * b.g(i, 1);
            const double bb = b.h(i, 0) * b.g(i, 2) + b.h(i, 2) * b.g(i, 0) -
                              2 * b.h(i, 1) * b.g(i, 1);
            const double c = b.h(i, 0) * b.h(i, 2) - b.h(i, 1) * b.h(i, 1);
            const double disc = std::sqrt(std::max(bb * bb - 4 * a * c, 0.0));
            b.kappa(i, 0) = (bb - disc) / (2 * a);
            b.kappa(i, 1) = (bb + disc) / (2 * a);
            b.u_of_rho.values[i] = r * r / sw;
            const double theta = g.coords()(i, 0), phi = g.coords()(i, 1);
            const Eigen::Vector3d x = g.nodes().row(i).transpose();
            const Eigen::Vector3d gradv =
                r1 * frame_theta(theta, phi) + r2 * frame_phi(phi);
            b.nu.row(i) = ((r * x - gradv) / sw).transpose();
        }
    }
    b.star_shaped = b.u_of_rho.values.minCoeff() > 0;
    return b;
}

Eigen::MatrixXd embed_support(const ScalarField& u) {
    const SphereGrid& g = *u.grid;
    const int m = g.size(), n = g.dim();
    {
        ShapeBundle b = bundle_from_support(u);
        if (!b.convex)
            throw admissibility_error("embed_support: bundle is not convex");
    }
    const Eigen::ArrayXXd grad = covariant_gradient(u);
    Eigen::MatrixXd X(m, n + 1);
    if (n == 1) {
        for (int i = 0; i < m; ++i) {
            const double t = g.coords()(i, 0);
            X(i, 0) = u.values[i] * std::cos(t) - grad(i, 0) * std::sin(t);
            X(i, 1) = u.values[i] * std::sin(t) + grad(i, 0) * std::cos(t);
        }
    } else {
        for (int i = 0; i < m; ++i) {
            const double theta = g.coords()(i, 0), phi = g.coords()(i, 1);
            const Eigen::Vector3d x = g.nodes().row(i).transpose();
            X.row(i) = (u.values[i] * x + grad(i, 0) * frame_theta(theta, phi) +
                        grad(i, 1) * frame_phi(phi))
                           .transpose();
        }
    }
    return X;
}

namespace {

// Vertex value of the interpolating parabola through (-1,g0),(0,g1),(1,g2);
// used to refine discrete argmin/argmax to sub-grid accuracy.
double parabola_extremum(double g0, double g1, double g2) {
    const double a1 = 0.5 * (g2 - g0);
    const double a2 = 0.5 * (g2 - 2 * g1 + g0);
    if (a2 == 0.0) return g1;
    double s = -a1 / (2 * a2);
    s = std::clamp(s, -1.0, 1.0);
    return g1 + a1 * s + a2 * s * s;
}

// Stationary value of the interpolating quadratic on a 3x3 index stencil.
double quadratic_extremum_2d(const double q[3][3]) {
    const double a0 = q[1][1];
    const double a1 = 0.5 * (q[2][1] - q[0][1]);
    const double a2 = 0.5 * (q[1][2] - q[1][0]);
    const double a3 = 0.5 * (q[2][1] - 2 * q[1][1] + q[0][1]);
    const double a5 = 0.5 * (q[1][2] - 2 * q[1][1] + q[1][0]);
    const double a4 = 0.25 * (q[2][2] - q[2][0] - q[0][2] + q[0][0]);
    const double det = 4 * a3 * a5 - a4 * a4;
    if (std::abs(det) < 1e-300) return a0;
    double s = (-2 * a5 * a1 + a4 * a2) / det;
    double t = (-2 * a3 * a2 + a4 * a1) / det;
    s = std::clamp(s, -1.0, 1.0);
    t = std::clamp(t, -1.0, 1.0);
    return a0 + a1 * s + a2 * t + a3 * s * s + a4 * s * t + a5 * t * t;
}

// Optimizes obj(j) over grid nodes (minimize or maximize) for each target
// direction, then refines around the discrete optimum.
template <typename Obj>
ScalarField resample(const GridPtr& grid, Obj&& obj, bool minimize) {
    const SphereGrid& g = *grid;
    const int m = g.size();
    ScalarField out{grid, Eigen::ArrayXd(m)};
    const double sgn = minimize ? 1.0 : -1.0;
    for (int i = 0; i < m; ++i) {
        int best = -1;
        double bestval = std::numeric_limits<double>::infinity();
        for (int j = 0; j < m; ++j) {
            const double v = obj(i, j);
            if (sgn * v < bestval) {
                bestval = sgn * v;
                best = j;
            }
        }
        if (g.dim() == 1) {
            auto val = [&](int dj) {
                auto [jj, ll] = g.wrap(best + dj, 0);
                return sgn * obj(i, g.index(jj, ll));
            };
            out.values[i] = sgn * parabola_extremum(val(-1), val(0), val(1));
        } else {
            const int bj = best / g.n_phi(), bl = best % g.n_phi();
            double q[3][3];
            for (int dj = -1; dj <= 1; ++dj)
                for (int dl = -1; dl <= 1; ++dl) {
                    auto [jj, ll] = g.wrap(bj + dj, bl + dl);
                    q[dj + 1][dl + 1] = sgn * obj(i, g.index(jj, ll));
                }
            out.values[i] = sgn * quadratic_extremum_2d(q);
        }
    }
    return out;
}

}  // namespace

ScalarField radial_from_support(const ScalarField& u) {
    {
        ShapeBundle b = bundle_from_support(u);
        if (!b.convex)
            throw admissibility_error("radial_from_support: bundle is not convex");
    }
    const Eigen::MatrixXd& nodes = u.grid->nodes();
    // rho(x) = min_y u(y)/<x,y> over <x,y> > 0 (exact for convex bodies).
    auto obj = [&](int i, int j) {
        const double dot = nodes.row(i).dot(nodes.row(j));
        if (dot <= 1e-8) return std::numeric_limits<double>::infinity();
        return u.values[j] / dot;
    };
    return resample(u.grid, obj, /*minimize=*/true);
}

ScalarField support_from_radial(const ScalarField& rho) {
    if (rho.values.minCoeff() <= 0)
        throw std::invalid_argument("support_from_radial: rho must be positive");
    const Eigen::MatrixXd& nodes = rho.grid->nodes();
    // u(y) = max_x rho(x) <x,y>.
    auto obj = [&](int i, int j) {
        return rho.values[j] * nodes.row(j).dot(nodes.row(i));
    };
    return resample(rho.grid, obj, /*minimize=*/false);
}

double volume_support(const ScalarField& u) {
    const SphereGrid& g = *u.grid;
    const Eigen::ArrayXXd hess = covariant_hessian(u);
    double acc = 0;
    if (g.dim() == 1) {
        for (int i = 0; i < g.size(); ++i)
            acc += g.weights()[i] * u.values[i] * (hess(i, 0) + u.values[i]);
        return acc / 2.0;
    }
    for (int i = 0; i < g.size(); ++i) {
        const double h11 = hess(i, 0) + u.values[i];
        const double h12 = hess(i, 1);
        const double h22 = hess(i, 2) + u.values[i];
        acc += g.weights()[i] * u.values[i] * (h11 * h22 - h12 * h12);
    }
    return acc / 3.0;
}

double volume_radial(const ScalarField& rho) {
    const int n = rho.grid->dim();
    double acc = 0;
    for (int i = 0; i < rho.grid->size(); ++i)
        acc += rho.grid->weights()[i] * std::pow(rho.values[i], n + 1);
    return acc / (n + 1);
}

void write_obj(const std::string& path, const ScalarField& u) {
    const SphereGrid& g = *u.grid;
    if (g.dim() != 2)
        throw std::invalid_argument("write_obj: mesh export requires an S^2 field");
    const Eigen::MatrixXd X = embed_support(u);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_obj: cannot open " + path);
    out.precision(12);
    for (int i = 0; i < g.size(); ++i)
        out << "v " << X(i, 0) << " " << X(i, 1) << " " << X(i, 2) << "\n";
    const int nt = g.n_theta(), np = g.n_phi();
    // Pole cap centroids close the mesh.
    Eigen::Vector3d north = Eigen::Vector3d::Zero(), south = Eigen::Vector3d::Zero();
    for (int l = 0; l < np; ++l) {
        north += X.row(g.index(0, l)).transpose();
        south += X.row(g.index(nt - 1, l)).transpose();
    }
    north /= np;
    south /= np;
    out << "v " << north.x() << " " << north.y() << " " << north.z() << "\n";
    out << "v " << south.x() << " " << south.y() << " " << south.z() << "\n";
    const int vn = g.size() + 1, vs = g.size() + 2;  // 1-based below
    auto v = [&](int j, int l) { return g.index(j, l % np) + 1; };
    for (int j = 0; j + 1 < nt; ++j)
        for (int l = 0; l < np; ++l) {
            out << "f " << v(j, l) << " " << v(j + 1, l) << " " << v(j + 1, l + 1) << "\n";
            out << "f " << v(j, l) << " " << v(j + 1, l + 1) << " " << v(j, l + 1) << "\n";
        }
    for (int l = 0; l < np; ++l) {
        out << "f " << vn << " " << v(0, l + 1) << " " << v(0, l) << "\n";
        out << "f " << vs << " " << v(nt - 1, l) << " " << v(nt - 1, l + 1) << "\n";
    }
}

void write_polyline_csv(const std::string& path, const ScalarField& u) {
    const SphereGrid& g = *u.grid;
    if (g.dim() != 1)
        throw std::invalid_argument("write_polyline_csv: requires an S^1 field");
    const Eigen::MatrixXd X = embed_support(u);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_polyline_csv: cannot open " + path);
    out.precision(12);
    out << "x,y\n";
    for (int i = 0; i < g.size(); ++i)
        out << X(i, 0) << "," << X(i, 1) << "\n";
    out << X(0, 0) << "," << X(0, 1) << "\n";
}

}  // namespace curveig
