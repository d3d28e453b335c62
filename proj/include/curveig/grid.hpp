#pragma once

#include <Eigen/Dense>

#include <memory>
#include <stdexcept>
#include <utility>

namespace curveig {

/// Finite-difference grid on S^1 or S^2.
///
/// S^1: uniform periodic nodes t_i = 2*pi*i/N.
/// S^2: pole-offset latitude-longitude grid, theta_j = (j+1/2)*pi/n_theta,
/// phi_l = 2*pi*l/n_phi. Resolutions must be even so that the antipodal map
/// is an exact node permutation. Immutable after construction.
class SphereGrid {
public:
    static std::shared_ptr<const SphereGrid> circle(int n_nodes);
    static std::shared_ptr<const SphereGrid> sphere(int n_theta, int n_phi);

    int dim() const { return n_; }
    int size() const { return static_cast<int>(weights_.size()); }

    /// Unit node directions, size x (n+1).
    const Eigen::MatrixXd& nodes() const { return nodes_; }
    /// Chart coordinates per node: (t) for S^1, (theta, phi) for S^2.
    const Eigen::ArrayXXd& coords() const { return coords_; }
    const Eigen::ArrayXd& weights() const { return weights_; }
    /// Involutive, fixed-point-free permutation with node[a[i]] = -node[i].
    const Eigen::ArrayXi& antipode() const { return antipode_; }

    int n_theta() const { return n_theta_; }
    int n_phi() const { return n_phi_; }
    double dtheta() const { return dtheta_; }
    double dphi() const { return dphi_; }

    int index(int j, int l) const { return n_ == 1 ? mod(j, n_theta_) : j * n_phi_ + l; }

    /// Resolves a (j, l) stencil offset, applying the pole ghost rule
    /// u(-theta, phi) = u(theta, phi + pi) and periodic wrap in phi.
    std::pair<int, int> wrap(int j, int l) const;

    /// Nominal discretization error scale: dt^4 on S^1 (4th-order stencils),
    /// max(dtheta, dphi)^2 on S^2 (2nd-order stencils).
    double nominal_error() const;

private:
    SphereGrid() = default;
    static int mod(int a, int m) { return ((a % m) + m) % m; }

    int n_ = 0;
    int n_theta_ = 0, n_phi_ = 0;
    double dtheta_ = 0, dphi_ = 0;
    Eigen::MatrixXd nodes_;
    Eigen::ArrayXXd coords_;
    Eigen::ArrayXd weights_;
    Eigen::ArrayXi antipode_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

/// One real value per grid node.
struct ScalarField {
    GridPtr grid;
    Eigen::ArrayXd values;

    int size() const { return static_cast<int>(values.size()); }
};

ScalarField constant_field(const GridPtr& grid, double c);

template <typename Fn>
ScalarField make_field(const GridPtr& grid, Fn&& fn) {
    ScalarField u{grid, Eigen::ArrayXd(grid->size())};
    for (int i = 0; i < grid->size(); ++i)
        u.values[i] = fn(grid->nodes().row(i));
    return u;
}

/// Covariant gradient in the orthonormal frame: (u') on S^1,
/// (u_theta, u_phi/sin(theta)) on S^2. Returns size x n.
Eigen::ArrayXXd covariant_gradient(const ScalarField& u);

/// Covariant Hessian components in the orthonormal frame.
/// S^1: size x 1 column (u''). S^2: size x 3 columns (H11, H12, H22) with
///   H11 = u_tt, H12 = (u_tp - cot(t) u_p)/sin(t),
///   H22 = u_pp/sin(t)^2 + cot(t) u_t.
Eigen::ArrayXXd covariant_hessian(const ScalarField& u);

double integrate(const ScalarField& u);

ScalarField antipodal_reflect(const ScalarField& u);

/// Interpolates grid samples at an arbitrary unit direction: periodic linear
/// on S^1, bilinear in (theta, phi) with the pole ghost rule on S^2.
double interpolate(const ScalarField& u, const Eigen::Vector3d& direction);

}  // namespace curveig
