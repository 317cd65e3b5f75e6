#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "nlrlda/dataset.hpp"
#include "nlrlda/population.hpp"
#include "nlrlda/precision.hpp"
#include "nlrlda/risk.hpp"
#include "nlrlda/stats.hpp"

namespace nlrlda {

/// Discriminant score W = (x - (m0+m1)/2)' H (m0 - m1).
double score(const Eigen::VectorXd& x, const Eigen::VectorXd& m0, const Eigen::VectorXd& m1,
             const PrecisionOperator& H);

/// Same score evaluated through the two whitened quadratic forms
///   W = (g1'g1 - g0'g0)/2,  g_i = (S + gamma I)^-1 S^(1/2) (x - m_i),
/// oriented so it coincides with score() for H = S(S+gamma I)^-2.
double score_quadratic(const Eigen::VectorXd& x, const Eigen::VectorXd& m0,
                       const Eigen::VectorXd& m1, const SymEig& eig, double gamma);

/// Class 0 iff W > tau_hat; ties (W == tau_hat) go to class 1.
int decide(double w, double tau_hat);

/// Optimal score with known population parameters.
double bayes_score(const Eigen::VectorXd& x, const PopulationModel& pop);

/// G(v; m0, m1, H) = (v - (m0+m1)/2)' H (m0 - m1).
double oracle_G(const Eigen::VectorXd& v, const Eigen::VectorXd& m0, const Eigen::VectorXd& m1,
                const PrecisionOperator& H);

/// D = (m0-m1)' H Sigma H (m0-m1) >= 0.
double oracle_D(const Eigen::VectorXd& m0, const Eigen::VectorXd& m1, const PrecisionOperator& H,
                const Eigen::MatrixXd& Sigma);

struct ConditionalError {
    double eps0 = 0.0;
    double eps1 = 0.0;
    double eps = 0.0;
};

/// Exact conditional misclassification rates of the trained rule under a known
/// population: eps_i = Phi(((-1)^(i+1) G(mu_i,...) + (-1)^i tau)/sqrt(D)),
/// weighted by the training priors. Throws degenerate_d when D = 0; the
/// trivial rate min(pi0, pi1) applies in that case.
ConditionalError oracle_conditional_error(const PopulationModel& pop, const ClassStats& stats,
                                          const PrecisionOperator& H);

struct GammaGrid {
    std::vector<double> values;  // strictly increasing, all > 0

    /// 21 log-spaced points 10^(5j/10), j = -10..10.
    static GammaGrid default_grid();
    static GammaGrid log_spaced(double lo, double hi, int count);
    void validate() const;
};

struct RiskPoint {
    double gamma = 0.0;
    double eps_hat = 0.0;
    double eps0_hat = 0.0;
    double eps1_hat = 0.0;
    bool degenerate = false;
};

struct TrainedModel {
    Eigen::VectorXd m0;
    Eigen::VectorXd m1;
    std::shared_ptr<const SymEig> eig;
    Eigen::Index n0 = 0;
    Eigen::Index n1 = 0;
    double gamma_star = 0.0;
    double tau_hat = 0.0;
    bool degenerate_fallback = false;  // every grid point degenerated; prior-only rule
    std::vector<RiskPoint> risk_curve;

    Eigen::Index dim() const { return m0.size(); }
    double pi0_hat() const { return static_cast<double>(n0) / static_cast<double>(n0 + n1); }
    double pi1_hat() const { return static_cast<double>(n1) / static_cast<double>(n0 + n1); }
    /// The selected NL precision operator (throws if degenerate_fallback).
    PrecisionOperator precision() const;
};

/// Full training pass: moments, one eigendecomposition, estimated risk at
/// every grid point, argmin selection (ties -> smallest gamma). Grid points
/// with D_c <= 0 are skipped and recorded; if all degenerate, the returned
/// model is the prior-only rule with degenerate_fallback set.
TrainedModel train(const LabeledDataset& data, const GammaGrid& grid,
                   Theorem2Variant variant = Theorem2Variant::appendix);

/// Score + decide per column of X.
std::vector<int> predict(const TrainedModel& model, const Eigen::MatrixXd& X);
std::vector<double> predict_scores(const TrainedModel& model, const Eigen::MatrixXd& X);

/// Model persistence (JSON text, exact double round-trip). Reloading yields
/// bit-identical predictions.
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace nlrlda
