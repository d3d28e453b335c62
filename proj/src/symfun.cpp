#include "curveig/symfun.hpp"

namespace curveig {

double quotient_F(const Eigen::MatrixXd& A, int k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const VecX<double> mu = es.eigenvalues();
    if (mu.minCoeff() <= 0.0)
        throw admissibility_error("quotient_F: matrix not positive definite");
    return hessian_quotient(mu, k);
}

Eigen::MatrixXd quotient_F_gradient(const Eigen::MatrixXd& A, int k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const VecX<double> mu = es.eigenvalues();
    if (mu.minCoeff() <= 0.0)
        throw admissibility_error("quotient_F_gradient: matrix not positive definite");
    const VecX<double> df = hessian_quotient_spectral_gradient(mu, k);
    const Eigen::MatrixXd& Q = es.eigenvectors();
    return Q * df.asDiagonal() * Q.transpose();
}

}  // namespace curveig
