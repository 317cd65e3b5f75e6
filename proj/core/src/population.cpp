#include "nlrlda/population.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace nlrlda {

double PopulationModel::mahalanobis_sq() const {
    Eigen::LLT<Eigen::MatrixXd> llt(Sigma);
    if (llt.info() != Eigen::Success) throw singular_sigma("Sigma is not positive definite");
    const Eigen::VectorXd diff = mu0 - mu1;
    return diff.dot(llt.solve(diff));
}

double calibrate_mean_scale(const Eigen::MatrixXd& Sigma, double nu_sq) {
    if (nu_sq <= 0.0) throw domain_error("nu_sq must be positive");
    Eigen::LLT<Eigen::MatrixXd> llt(Sigma);
    if (llt.info() != Eigen::Success) throw singular_sigma("Sigma is not positive definite");
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(Sigma.rows());
    const double quad = ones.dot(llt.solve(ones));
    if (!(quad > 0.0) || !std::isfinite(quad))
        throw singular_sigma("1'Sigma^-1 1 is not positive");
    return std::sqrt(nu_sq / (4.0 * quad));
}

}  // namespace nlrlda
