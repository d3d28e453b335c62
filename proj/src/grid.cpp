#include "curveig/grid.hpp"

#include <cmath>

namespace curveig {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::shared_ptr<const SphereGrid> SphereGrid::circle(int n_nodes) {
    if (n_nodes < 8 || n_nodes % 2 != 0)
        throw std::invalid_argument("circle grid needs even N >= 8 (antipodal closure)");
    auto g = std::shared_ptr<SphereGrid>(new SphereGrid());
    g->n_ = 1;
    g->n_theta_ = n_nodes;
    g->n_phi_ = 0;
    g->dtheta_ = 2.0 * kPi / n_nodes;
    g->nodes_.resize(n_nodes, 2);
    g->coords_.resize(n_nodes, 1);
    g->weights_ = Eigen::ArrayXd::Constant(n_nodes, g->dtheta_);
    g->antipode_.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const double t = g->dtheta_ * i;
        g->nodes_(i, 0) = std::cos(t);
        g->nodes_(i, 1) = std::sin(t);
        g->coords_(i, 0) = t;
        g->antipode_[i] = (i + n_nodes / 2) % n_nodes;
    }
    return g;
}

std::shared_ptr<const SphereGrid> SphereGrid::sphere(int n_theta, int n_phi) {
    if (n_theta < 8 || n_theta % 2 != 0 || n_phi < 16 || n_phi % 2 != 0)
        throw std::invalid_argument(
            "sphere grid needs even n_theta >= 8 and even n_phi >= 16 (antipodal closure)");
    auto g = std::shared_ptr<SphereGrid>(new SphereGrid());
    g->n_ = 2;
    g->n_theta_ = n_theta;
    g->n_phi_ = n_phi;
    g->dtheta_ = kPi / n_theta;
    g->dphi_ = 2.0 * kPi / n_phi;
    const int m = n_theta * n_phi;
    g->nodes_.resize(m, 3);
    g->coords_.resize(m, 2);
    g->weights_.resize(m);
    g->antipode_.resize(m);
    for (int j = 0; j < n_theta; ++j) {
        const double theta = (j + 0.5) * g->dtheta_;
        for (int l = 0; l < n_phi; ++l) {
            const double phi = l * g->dphi_;
            const int i = g->index(j, l);
            g->nodes_(i, 0) = std::sin(theta) * std::cos(phi);
            g->nodes_(i, 1) = std::sin(theta) * std::sin(phi);
            g->nodes_(i, 2) = std::cos(theta);
            g->coords_(i, 0) = theta;
            g->coords_(i, 1) = phi;
            // Exact spherical cell area (integral of sin over the theta cell):
            // sums to 4*pi exactly and agrees with sin(theta) dtheta dphi to
            // second order, matching the FD stencils.
            g->weights_[i] =
                (std::cos(j * g->dtheta_) - std::cos((j + 1) * g->dtheta_)) * g->dphi_;
            g->antipode_[i] = g->index(n_theta - 1 - j, (l + n_phi / 2) % n_phi);
        }
    }
    return g;
}

std::pair<int, int> SphereGrid::wrap(int j, int l) const {
    if (n_ == 1)
        return {mod(j, n_theta_), 0};
    if (j < 0) {
        j = -1 - j;
        l += n_phi_ / 2;
    } else if (j >= n_theta_) {
        j = 2 * n_theta_ - 1 - j;
        l += n_phi_ / 2;
    }
    return {j, mod(l, n_phi_)};
}

double SphereGrid::nominal_error() const {
    if (n_ == 1) {
        const double h = dtheta_;
        return h * h * h * h;
    }
    const double h = std::max(dtheta_, dphi_);
    return h * h;
}

ScalarField constant_field(const GridPtr& grid, double c) {
    return {grid, Eigen::ArrayXd::Constant(grid->size(), c)};
}

namespace {

// Value at stencil offset (j+dj, l+dl) with ghost/periodic wrap applied.
inline double at(const SphereGrid& g, const Eigen::ArrayXd& v, int j, int l) {
    auto [jj, ll] = g.wrap(j, l);
    return v[g.index(jj, ll)];
}

}  // namespace

Eigen::ArrayXXd covariant_gradient(const ScalarField& u) {
    const SphereGrid& g = *u.grid;
    const Eigen::ArrayXd& v = u.values;
    Eigen::ArrayXXd grad(g.size(), g.dim());
    if (g.dim() == 1) {
        const double h = g.dtheta();
        const int n = g.n_theta();
        for (int i = 0; i < n; ++i) {
            grad(i, 0) = (-at(g, v, i + 2, 0) + 8 * at(g, v, i + 1, 0) -
                          8 * at(g, v, i - 1, 0) + at(g, v, i - 2, 0)) /
                         (12 * h);
        }
        return grad;
    }
    const double dt = g.dtheta(), dp = g.dphi();
    for (int j = 0; j < g.n_theta(); ++j) {
        for (int l = 0; l < g.n_phi(); ++l) {
            const int i = g.index(j, l);
            const double st = std::sin(g.coords()(i, 0));
            const double ut = (at(g, v, j + 1, l) - at(g, v, j - 1, l)) / (2 * dt);
            const double up = (at(g, v, j, l + 1) - at(g, v, j, l - 1)) / (2 * dp);
            grad(i, 0) = ut;
            grad(i, 1) = up / st;
        }
    }
    return grad;
}

Eigen::ArrayXXd covariant_hessian(const ScalarField& u) {
    const SphereGrid& g = *u.grid;
    const Eigen::ArrayXd& v = u.values;
    if (g.dim() == 1) {
        Eigen::ArrayXXd hess(g.size(), 1);
        const double h = g.dtheta();
        const int n = g.n_theta();
        for (int i = 0; i < n; ++i) {
            hess(i, 0) = (-at(g, v, i + 2, 0) + 16 * at(g, v, i + 1, 0) - 30 * v[i] +
                          16 * at(g, v, i - 1, 0) - at(g, v, i - 2, 0)) /
                         (12 * h * h);
        }
        return hess;
    }
    Eigen::ArrayXXd hess(g.size(), 3);
    const double dt = g.dtheta(), dp = g.dphi();
    for (int j = 0; j < g.n_theta(); ++j) {
        for (int l = 0; l < g.n_phi(); ++l) {
            const int i = g.index(j, l);
            const double theta = g.coords()(i, 0);
            const double st = std::sin(theta), ct = std::cos(theta);
            const double utt =
                (at(g, v, j + 1, l) - 2 * v[i] + at(g, v, j - 1, l)) / (dt * dt);
            const double upp =
                (at(g, v, j, l + 1) - 2 * v[i] + at(g, v, j, l - 1)) / (dp * dp);
            const double ut = (at(g, v, j + 1, l) - at(g, v, j - 1, l)) / (2 * dt);
            const double up = (at(g, v, j, l + 1) - at(g, v, j, l - 1)) / (2 * dp);
            const double utp = (at(g, v, j + 1, l + 1) - at(g, v, j + 1, l - 1) -
                                at(g, v, j - 1, l + 1) + at(g, v, j - 1, l - 1)) /
                               (4 * dt * dp);
            hess(i, 0) = utt;
            hess(i, 1) = (utp - (ct / st) * up) / st;
            hess(i, 2) = upp / (st * st) + (ct / st) * ut;
        }
    }
    return hess;
}

double integrate(const ScalarField& u) {
    return (u.grid->weights() * u.values).sum();
}

ScalarField antipodal_reflect(const ScalarField& u) {
    ScalarField r{u.grid, Eigen::ArrayXd(u.size())};
    const auto& a = u.grid->antipode();
    for (int i = 0; i < u.size(); ++i)
        r.values[i] = u.values[a[i]];
    return r;
}

double interpolate(const ScalarField& u, const Eigen::Vector3d& direction) {
    const SphereGrid& g = *u.grid;
    const Eigen::ArrayXd& v = u.values;
    if (g.dim() == 1) {
        double t = std::atan2(direction.y(), direction.x());
        if (t < 0) t += 2 * kPi;
        const double s = t / g.dtheta();
        const int i0 = static_cast<int>(std::floor(s));
        const double w = s - i0;
        return (1 - w) * at(g, v, i0, 0) + w * at(g, v, i0 + 1, 0);
    }
    const Eigen::Vector3d d = direction.normalized();
    const double theta = std::acos(std::clamp(d.z(), -1.0, 1.0));
    double phi = std::atan2(d.y(), d.x());
    if (phi < 0) phi += 2 * kPi;
    const double sj = theta / g.dtheta() - 0.5;
    const double sl = phi / g.dphi();
    const int j0 = static_cast<int>(std::floor(sj));
    const int l0 = static_cast<int>(std::floor(sl));
    const double wj = sj - j0, wl = sl - l0;
    return (1 - wj) * (1 - wl) * at(g, v, j0, l0) + (1 - wj) * wl * at(g, v, j0, l0 + 1) +
           wj * (1 - wl) * at(g, v, j0 + 1, l0) + wj * wl * at(g, v, j0 + 1, l0 + 1);
}

}  // namespace curveig
