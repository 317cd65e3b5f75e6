#include "nlrlda/classifier.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

namespace nlrlda {

double score(const Eigen::VectorXd& x, const Eigen::VectorXd& m0, const Eigen::VectorXd& m1,
             const PrecisionOperator& H) {
    if (x.size() != m0.size() || m0.size() != m1.size() || x.size() != H.dim())
        throw dimension_mismatch("score: inconsistent dimensions");
    return (x - 0.5 * (m0 + m1)).dot(H.apply(m0 - m1));
}

double score_quadratic(const Eigen::VectorXd& x, const Eigen::VectorXd& m0,
                       const Eigen::VectorXd& m1, const SymEig& eig, double gamma) {
    if (x.size() != m0.size() || m0.size() != m1.size() || x.size() != eig.eigenvalues.size())
        throw dimension_mismatch("score_quadratic: inconsistent dimensions");
    // g_i = diag(sqrt(l)/(l+gamma)) U' (x - m_i) in the eigenbasis.
    Eigen::VectorXd filt(eig.eigenvalues.size());
    for (Eigen::Index d = 0; d < filt.size(); ++d) {
        const double l = eig.eigenvalues(d);
        filt(d) = l == 0.0 ? 0.0 : std::sqrt(l) / (l + gamma);
    }
    const Eigen::VectorXd g0 = filt.cwiseProduct(eig.U.transpose() * (x - m0));
    const Eigen::VectorXd g1 = filt.cwiseProduct(eig.U.transpose() * (x - m1));
    return 0.5 * (g1.squaredNorm() - g0.squaredNorm());
}

int decide(double w, double tau_hat) { return w > tau_hat ? 0 : 1; }

double bayes_score(const Eigen::VectorXd& x, const PopulationModel& pop) {
    Eigen::LLT<Eigen::MatrixXd> llt(pop.Sigma);
    if (llt.info() != Eigen::Success) throw singular_sigma("Sigma is not positive definite");
    return (x - 0.5 * (pop.mu0 + pop.mu1)).dot(llt.solve(pop.mu0 - pop.mu1));
}

double oracle_G(const Eigen::VectorXd& v, const Eigen::VectorXd& m0, const Eigen::VectorXd& m1,
                const PrecisionOperator& H) {
    if (v.size() != m0.size() || m0.size() != m1.size() || v.size() != H.dim())
        throw dimension_mismatch("oracle_G: inconsistent dimensions");
    return (v - 0.5 * (m0 + m1)).dot(H.apply(m0 - m1));
}

double oracle_D(const Eigen::VectorXd& m0, const Eigen::VectorXd& m1, const PrecisionOperator& H,
                const Eigen::MatrixXd& Sigma) {
    if (m0.size() != m1.size() || m0.size() != H.dim() || Sigma.rows() != m0.size() ||
        Sigma.cols() != m0.size())
        throw dimension_mismatch("oracle_D: inconsistent dimensions");
    const Eigen::VectorXd hm = H.apply(m0 - m1);
    return hm.dot(Sigma * hm);
}

ConditionalError oracle_conditional_error(const PopulationModel& pop, const ClassStats& stats,
                                          const PrecisionOperator& H) {
    const double d = oracle_D(stats.m0, stats.m1, H, pop.Sigma);
    if (!(d > 0.0)) throw degenerate_d("D = " + std::to_string(d) + " is not positive");
    const double tau = stats.tau_hat();
    const double g0 = oracle_G(pop.mu0, stats.m0, stats.m1, H);
    const double g1 = oracle_G(pop.mu1, stats.m0, stats.m1, H);
    ConditionalError ce;
    const double sd = std::sqrt(d);
    ce.eps0 = normal_cdf((-g0 + tau) / sd);
    ce.eps1 = normal_cdf((g1 - tau) / sd);
    ce.eps = stats.pi0_hat() * ce.eps0 + stats.pi1_hat() * ce.eps1;
    return ce;
}

GammaGrid GammaGrid::default_grid() {
    GammaGrid g;
    g.values.reserve(21);
    for (int j = -10; j <= 10; ++j) g.values.push_back(std::pow(10.0, 0.5 * j));
    return g;
}

GammaGrid GammaGrid::log_spaced(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw domain_error("log_spaced grid needs 0 < lo < hi and count >= 2");
    GammaGrid g;
    g.values.reserve(static_cast<std::size_t>(count));
    const double step = (std::log10(hi) - std::log10(lo)) / (count - 1);
    for (int j = 0; j < count; ++j) g.values.push_back(std::pow(10.0, std::log10(lo) + step * j));
    return g;
}

void GammaGrid::validate() const {
    if (values.empty()) throw domain_error("gamma grid is empty");
    double prev = 0.0;
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw domain_error("gamma grid values must be positive");
        if (v <= prev) throw domain_error("gamma grid must be strictly increasing");
        prev = v;
    }
}

PrecisionOperator TrainedModel::precision() const {
    if (degenerate_fallback)
        throw degenerate_d("model is the trivial prior-only fallback; no precision operator");
    return nl_precision(eig, RegParam{gamma_star});
}

TrainedModel train(const LabeledDataset& data, const GammaGrid& grid, Theorem2Variant variant) {
    grid.validate();
    const ClassStats stats = pooled_covariance(data);
    TrainedModel model;
    model.m0 = stats.m0;
    model.m1 = stats.m1;
    model.n0 = stats.n0;
    model.n1 = stats.n1;
    model.tau_hat = stats.tau_hat();
    model.eig = std::make_shared<const SymEig>(sym_eig(stats.S));

    const Eigen::VectorXd coeff = model.eig->U.transpose() * (stats.m0 - stats.m1);
    const double n_tilde = static_cast<double>(stats.n_tilde());

    double best = std::numeric_limits<double>::infinity();
    double best_gamma = 0.0;
    bool any_valid = false;
    for (double gamma : grid.values) {
        RiskPoint pt;
        pt.gamma = gamma;
        const ResolventStats rs = resolvent_stats(model.eig->eigenvalues, coeff, gamma, n_tilde);
        try {
            const ConsistentRisk cr = consistent_risk(rs, stats.n0, stats.n1, variant);
            pt.eps_hat = cr.eps_hat;
            pt.eps0_hat = cr.eps0_hat;
            pt.eps1_hat = cr.eps1_hat;
            if (cr.eps_hat < best) {  // strict: equal minima keep the smaller gamma
                best = cr.eps_hat;
                best_gamma = gamma;
            }
            any_valid = true;
        } catch (const degenerate_d&) {
            pt.degenerate = true;
        } catch (const degenerate_prime&) {
            pt.degenerate = true;
        }
        model.risk_curve.push_back(pt);
    }
    if (!any_valid) {
        model.degenerate_fallback = true;
        model.gamma_star = std::numeric_limits<double>::quiet_NaN();
        return model;
    }
    model.gamma_star = best_gamma;
    return model;
}

std::vector<double> predict_scores(const TrainedModel& model, const Eigen::MatrixXd& X) {
    if (X.rows() != model.dim()) throw dimension_mismatch("feature dimension does not match model");
    std::vector<double> scores(static_cast<std::size_t>(X.cols()), 0.0);
    if (model.degenerate_fallback) return scores;  // W == 0 everywhere, decide() applies the prior rule
    const PrecisionOperator H = model.precision();
    const Eigen::VectorXd w = H.apply(model.m0 - model.m1);
    const double offset = 0.5 * (model.m0 + model.m1).dot(w);
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        scores[static_cast<std::size_t>(j)] = X.col(j).dot(w) - offset;
    return scores;
}

std::vector<int> predict(const TrainedModel& model, const Eigen::MatrixXd& X) {
    const std::vector<double> scores = predict_scores(model, X);
    std::vector<int> labels(scores.size());
    if (model.degenerate_fallback) {
        // Prior-only rule: everything goes to the more probable class,
        // class 1 on ties (consistent with W <= tau deciding class 1).
        const int label = model.pi0_hat() > model.pi1_hat() ? 0 : 1;
        std::fill(labels.begin(), labels.end(), label);
        return labels;
    }
    for (std::size_t j = 0; j < scores.size(); ++j) labels[j] = decide(scores[j], model.tau_hat);
    return labels;
}

}  // namespace nlrlda
