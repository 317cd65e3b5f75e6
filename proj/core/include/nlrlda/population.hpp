#pragma once

#include <Eigen/Dense>

#include "nlrlda/errors.hpp"

namespace nlrlda {

/// Ground-truth Gaussian population: class means and the common covariance.
struct PopulationModel {
    Eigen::VectorXd mu0;
    Eigen::VectorXd mu1;
    Eigen::MatrixXd Sigma;

    Eigen::Index dim() const { return Sigma.rows(); }
    /// (mu0 - mu1)' Sigma^-1 (mu0 - mu1). Throws singular_sigma if the solve fails.
    double mahalanobis_sq() const;
};

/// Scale k such that mu0 = k*1, mu1 = -mu0 gives the requested squared
/// Mahalanobis distance: 4 k^2 1'Sigma^-1 1 = nu_sq.
double calibrate_mean_scale(const Eigen::MatrixXd& Sigma, double nu_sq);

}  // namespace nlrlda
