#include "nlrlda/precision.hpp"

#include <cmath>

namespace nlrlda {

Eigen::VectorXd PrecisionOperator::apply(const Eigen::VectorXd& v) const {
    if (v.size() != dim_) throw dimension_mismatch("operator/vector size mismatch");
    if (llt_) return llt_->solve(v);
    return eig_->U * (spectrum_.cwiseProduct(eig_->U.transpose() * v));
}

const Eigen::MatrixXd& PrecisionOperator::materialize() const {
    if (!dense_) {
        if (llt_) {
            dense_ = std::make_shared<const Eigen::MatrixXd>(
                llt_->solve(Eigen::MatrixXd::Identity(dim_, dim_)));
        } else {
            dense_ = std::make_shared<const Eigen::MatrixXd>(
                eig_->U * spectrum_.asDiagonal() * eig_->U.transpose());
        }
    }
    return *dense_;
}

PrecisionOperator nl_precision(std::shared_ptr<const SymEig> eig, RegParam gamma) {
    if (!(gamma.gamma > 0.0) || !std::isfinite(gamma.gamma))
        throw domain_error("gamma must be positive and finite");
    PrecisionOperator op;
    op.kind_ = PrecisionKind::NL;
    op.gamma_ = gamma;
    op.dim_ = eig->eigenvalues.size();
    op.spectrum_.resize(op.dim_);
    for (Eigen::Index d = 0; d < op.dim_; ++d) {
        const double l = eig->eigenvalues(d);
        const double denom = l + gamma.gamma;
        op.spectrum_(d) = l == 0.0 ? 0.0 : l / (denom * denom);
    }
    op.eig_ = std::move(eig);
    return op;
}

PrecisionOperator ridge_precision(const Eigen::MatrixXd& S, double gamma, PrecisionKind kind,
                                  const std::optional<Eigen::MatrixXd>& F) {
    PrecisionOperator op;
    op.kind_ = kind;
    op.gamma_ = RegParam{gamma};
    op.dim_ = S.rows();
    switch (kind) {
        case PrecisionKind::NL:
            return nl_precision(std::make_shared<const SymEig>(sym_eig(S)), RegParam{gamma});
        case PrecisionKind::LinearA:
        case PrecisionKind::LinearB: {
            if (!(gamma > 0.0) || !std::isfinite(gamma))
                throw domain_error("gamma must be in (0, inf) for the plain ridge forms");
            auto eig = std::make_shared<const SymEig>(sym_eig(S));
            op.spectrum_.resize(op.dim_);
            for (Eigen::Index d = 0; d < op.dim_; ++d) {
                const double l = eig->eigenvalues(d);
                op.spectrum_(d) =
                    kind == PrecisionKind::LinearA ? 1.0 / (gamma * l + 1.0) : 1.0 / (l + gamma);
            }
            op.eig_ = std::move(eig);
            return op;
        }
        case PrecisionKind::LinearTarget: {
            if (!(gamma > 0.0 && gamma < 1.0))
                throw domain_error("gamma must be in (0,1) for the target form");
            Eigen::MatrixXd target = F ? *F : Eigen::MatrixXd(S.diagonal().asDiagonal());
            Eigen::MatrixXd combined = gamma * S + (1.0 - gamma) * target;
            auto llt = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(combined);
            if (llt->info() != Eigen::Success)
                throw singular_target("gamma*S + (1-gamma)*F is not positive definite");
            op.llt_ = std::move(llt);
            return op;
        }
    }
    throw domain_error("unknown precision kind");
}

double filter_coeff(double lambda, double gamma, PrecisionKind kind) {
    const double r = lambda / (lambda + gamma);
    return kind == PrecisionKind::NL ? r * r : r;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> contribution_ratios(const Eigen::VectorXd& lambdas,
                                                                double gamma) {
    if (lambdas.size() == 0 || !(lambdas(0) > 0.0))
        throw all_zero_spectrum("largest eigenvalue must be positive");
    const double l1 = lambdas(0);
    Eigen::VectorXd rho_l(lambdas.size()), rho_nl(lambdas.size());
    for (Eigen::Index d = 0; d < lambdas.size(); ++d) {
        const double ld = lambdas(d);
        const double r = (l1 * ld + gamma * ld) / (l1 * ld + gamma * l1);
        rho_l(d) = r;
        rho_nl(d) = r * r;
    }
    return {rho_l, rho_nl};
}

}  // namespace nlrlda
