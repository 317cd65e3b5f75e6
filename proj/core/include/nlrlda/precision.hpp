#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>

#include "nlrlda/errors.hpp"
#include "nlrlda/stats.hpp"

namespace nlrlda {

enum class PrecisionKind {
    NL,            // S (S + gamma I)^-2, spectral filter lambda/(lambda+gamma)^2
    LinearA,       // (gamma S + I)^-1
    LinearB,       // (S + gamma I)^-1
    LinearTarget,  // (gamma S + (1-gamma) F)^-1, gamma in (0,1)
};

struct RegParam {
    double gamma = 1.0;
    double z() const { return -gamma; }
};

/// An inverse-covariance estimator held in applied form. NL and the two plain
/// ridge kinds share the eigendecomposition of S and store only the filtered
/// spectrum; LinearTarget keeps a Cholesky factor of gamma*S + (1-gamma)*F.
/// Immutable after construction; materialize() caches the dense matrix.
class PrecisionOperator {
public:
    PrecisionKind kind() const { return kind_; }
    double gamma() const { return gamma_.gamma; }
    Eigen::Index dim() const { return dim_; }

    /// H * v without materializing H.
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

    /// Dense H; computed once and cached.
    const Eigen::MatrixXd& materialize() const;

    /// Eigenvalues of H along the shared eigenbasis (empty for LinearTarget).
    const Eigen::VectorXd& spectrum() const { return spectrum_; }
    const std::shared_ptr<const SymEig>& eig() const { return eig_; }

    friend PrecisionOperator nl_precision(std::shared_ptr<const SymEig> eig, RegParam gamma);
    friend PrecisionOperator ridge_precision(const Eigen::MatrixXd& S, double gamma, PrecisionKind kind,
                                             const std::optional<Eigen::MatrixXd>& F);

private:
    PrecisionOperator() = default;

    PrecisionKind kind_ = PrecisionKind::NL;
    RegParam gamma_;
    Eigen::Index dim_ = 0;
    std::shared_ptr<const SymEig> eig_;       // NL / LinearA / LinearB
    Eigen::VectorXd spectrum_;                // filtered eigenvalues of H
    std::shared_ptr<Eigen::LLT<Eigen::MatrixXd>> llt_;  // LinearTarget
    mutable std::shared_ptr<const Eigen::MatrixXd> dense_;
};

/// H = U diag(lambda_d / (lambda_d + gamma)^2) U'. Zero eigenvalues of S
/// contribute exactly zero.
PrecisionOperator nl_precision(std::shared_ptr<const SymEig> eig, RegParam gamma);

/// The linear ridge forms. LinearA/LinearB take gamma in (0, inf);
/// LinearTarget takes gamma in (0,1) and an SPD target F (default diag(S)).
PrecisionOperator ridge_precision(const Eigen::MatrixXd& S, double gamma, PrecisionKind kind,
                                  const std::optional<Eigen::MatrixXd>& F = std::nullopt);

/// Spectral weight of eigenvalue lambda in the covariance-inverse estimate:
/// lambda^2/(lambda+gamma)^2 for NL, lambda/(lambda+gamma) for the linear kinds.
double filter_coeff(double lambda, double gamma, PrecisionKind kind);

/// Relative contribution of each eigenvalue against the largest one:
/// rho_L(d) = (l1*ld + g*ld) / (l1*ld + g*l1) and rho_NL = rho_L^2.
/// Input eigenvalues must be descending with lambda_1 > 0.
std::pair<Eigen::VectorXd, Eigen::VectorXd> contribution_ratios(const Eigen::VectorXd& lambdas,
                                                                double gamma);

}  // namespace nlrlda
