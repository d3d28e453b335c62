#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace curveig {

/// Thrown when an operand leaves the admissible regime (positive definiteness
/// or Garding-cone membership), as opposed to a plain numeric failure.
struct admissibility_error : std::runtime_error {
    explicit admissibility_error(const std::string& what, int node = -1)
        : std::runtime_error(what), node(node) {}
    int node;  // worst offending grid node, -1 if not node-bound
};

template <typename Real>
using VecX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// All elementary symmetric polynomials e_0..e_n of the spectrum, computed by
/// the coefficient recurrence of prod_i (1 + s_i t). Exact subset-sum values.
template <typename Real>
VecX<Real> elementary_symmetric(const VecX<Real>& s) {
    const int n = static_cast<int>(s.size());
    VecX<Real> e = VecX<Real>::Zero(n + 1);
    e[0] = Real(1);
    for (int i = 0; i < n; ++i)
        for (int j = std::min(i + 1, n); j >= 1; --j)
            e[j] += e[j - 1] * s[i];
    return e;
}

template <typename Real>
Real sigma_k(const VecX<Real>& s, int k) {
    if (k < 0 || k > s.size())
        throw std::invalid_argument("sigma_k: k out of range");
    return elementary_symmetric(s)[k];
}

/// d sigma_k / d s_i = sigma_{k-1} of the spectrum with entry i removed.
template <typename Real>
VecX<Real> sigma_k_gradient(const VecX<Real>& s, int k) {
    const int n = static_cast<int>(s.size());
    if (k < 1 || k > n)
        throw std::invalid_argument("sigma_k_gradient: k out of range");
    VecX<Real> grad(n);
    VecX<Real> rest(n - 1);
    for (int i = 0; i < n; ++i) {
        int m = 0;
        for (int j = 0; j < n; ++j)
            if (j != i) rest[m++] = s[j];
        grad[i] = elementary_symmetric(rest)[k - 1];
    }
    return grad;
}

/// Garding cone membership: sigma_i(s) > 0 for i = 1..k, strict with zero
/// tolerance. Callers add their own margins.
template <typename Real>
bool in_gamma_k(const VecX<Real>& s, int k) {
    if (k < 1 || k > s.size())
        throw std::invalid_argument("in_gamma_k: k out of range");
    const VecX<Real> e = elementary_symmetric(s);
    for (int i = 1; i <= k; ++i)
        if (!(e[i] > Real(0))) return false;
    return true;
}

/// Hessian quotient F = (sigma_n / sigma_{n-k})^{1/k} on a positive spectrum.
template <typename Real>
Real hessian_quotient(const VecX<Real>& mu, int k) {
    const int n = static_cast<int>(mu.size());
    if (k < 1 || k > n)
        throw std::invalid_argument("hessian_quotient: k out of range");
    if (mu.minCoeff() <= Real(0))
        throw admissibility_error("hessian_quotient: spectrum not positive");
    const VecX<Real> e = elementary_symmetric(mu);
    using std::pow;
    return pow(e[n] / e[n - k], Real(1) / Real(k));
}

/// dF/d mu_i of the Hessian quotient, on the spectrum.
template <typename Real>
VecX<Real> hessian_quotient_spectral_gradient(const VecX<Real>& mu, int k) {
    const int n = static_cast<int>(mu.size());
    if (mu.minCoeff() <= Real(0))
        throw admissibility_error("hessian_quotient_spectral_gradient: spectrum not positive");
    const VecX<Real> e = elementary_symmetric(mu);
    const VecX<Real> dn = sigma_k_gradient(mu, n);
    VecX<Real> dq(n);
    if (k == n) {
        for (int i = 0; i < n; ++i) dq[i] = dn[i];
    } else {
        const VecX<Real> dd = sigma_k_gradient(mu, n - k);
        for (int i = 0; i < n; ++i)
            dq[i] = (dn[i] * e[n - k] - e[n] * dd[i]) / (e[n - k] * e[n - k]);
    }
    using std::pow;
    const Real ratio = e[n] / e[n - k];
    const Real scale = pow(ratio, Real(1) / Real(k) - Real(1)) / Real(k);
    for (int i = 0; i < n; ++i) dq[i] *= scale;
    return dq;
}

/// F applied to the eigenvalues of a symmetric matrix. Requires A positive
/// definite (the admissible regime).
double quotient_F(const Eigen::MatrixXd& A, int k);

/// Matrix derivative F^{ij} = dF/dA_{ij}, assembled in A's eigenbasis. For a
/// scalar spectral function with a symmetric gradient this formula is already
/// continuous across repeated eigenvalues.
Eigen::MatrixXd quotient_F_gradient(const Eigen::MatrixXd& A, int k);

/// |sigma_k(s) - sigma_{n-k}(1/s)/sigma_n(1/s)|.
template <typename Real>
Real reciprocal_identity_residual(const VecX<Real>& s, int k) {
    const int n = static_cast<int>(s.size());
    if (k < 0 || k > n)
        throw std::invalid_argument("reciprocal_identity_residual: k out of range");
    VecX<Real> inv(n);
    for (int i = 0; i < n; ++i) {
        if (s[i] == Real(0))
            throw std::invalid_argument("reciprocal_identity_residual: zero entry");
        inv[i] = Real(1) / s[i];
    }
    const VecX<Real> e = elementary_symmetric(s);
    const VecX<Real> ei = elementary_symmetric(inv);
    using std::abs;
    return abs(e[k] - ei[n - k] / ei[n]);
}

}  // namespace curveig
