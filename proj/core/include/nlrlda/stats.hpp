#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "nlrlda/dataset.hpp"

namespace nlrlda {

/// Sample means and the pooled covariance S = (1/(n-2)) sum_i (n_i - 1) S_i.
struct ClassStats {
    Eigen::VectorXd m0;
    Eigen::VectorXd m1;
    Eigen::MatrixXd S;
    Eigen::Index n0 = 0;
    Eigen::Index n1 = 0;

    Eigen::Index n() const { return n0 + n1; }
    Eigen::Index n_tilde() const { return n0 + n1 - 2; }
    double pi0_hat() const { return static_cast<double>(n0) / static_cast<double>(n()); }
    double pi1_hat() const { return static_cast<double>(n1) / static_cast<double>(n()); }
    /// Decision threshold log(pi1_hat / pi0_hat).
    double tau_hat() const { return std::log(static_cast<double>(n1) / static_cast<double>(n0)); }
};

/// Spectral decomposition of a symmetric PSD matrix, eigenvalues descending.
/// Tiny negative eigenvalues in [-1e-10*lambda_1, 0) are clamped to zero so
/// spectral filters stay well defined.
struct SymEig {
    Eigen::VectorXd eigenvalues;  // descending
    Eigen::MatrixXd U;            // orthogonal, columns aligned with eigenvalues
};

std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_means(const LabeledDataset& data);

/// Requires at least two samples per class.
ClassStats pooled_covariance(const LabeledDataset& data);

SymEig sym_eig(const Eigen::MatrixXd& S);

}  // namespace nlrlda
