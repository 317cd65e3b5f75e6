#include "nlrlda/synth.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace nlrlda {

Eigen::MatrixXd build_cov(CovModel model, Eigen::Index p) {
    if (p < 2) throw domain_error("covariance models need p >= 2");
    Eigen::MatrixXd S(p, p);
    switch (model) {
        case CovModel::model1:
            S.setConstant(0.1);
            S.diagonal().setOnes();
            break;
        case CovModel::model2:
            for (Eigen::Index i = 0; i < p; ++i)
                for (Eigen::Index j = 0; j < p; ++j)
                    S(i, j) = std::pow(0.9, static_cast<double>(std::abs(i - j)));
            break;
        case CovModel::model3:
            for (Eigen::Index i = 0; i < p; ++i) {
                for (Eigen::Index j = 0; j < p; ++j) {
                    const Eigen::Index d = std::abs(i - j);
                    S(i, j) = d == 0 ? 1.0 : (d <= 4 ? 0.9 : (d <= 9 ? 0.3 : 0.0));
                }
            }
            break;
        default:
            throw domain_error("unknown covariance model");
    }
    return S;
}

PopulationModel make_population(CovModel model, Eigen::Index p, double nu_sq) {
    PopulationModel pop;
    pop.Sigma = build_cov(model, p);
    const double k = calibrate_mean_scale(pop.Sigma, nu_sq);
    pop.mu0 = Eigen::VectorXd::Constant(p, k);
    pop.mu1 = -pop.mu0;
    return pop;
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t trial_index) {
    std::uint64_t x = seed + (trial_index + 1) * 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t trial_index)
    : engine_(derive_stream_seed(seed, trial_index)) {}

double RngStream::uniform() {
    // (0, 1]: never returns 0 so log() below is safe.
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

LabeledDataset sample_gaussian(const PopulationModel& pop, Eigen::Index n0, Eigen::Index n1,
                               RngStream& rng) {
    if (n0 <= 0 || n1 <= 0) throw insufficient_samples("both class counts must be positive");
    Eigen::LLT<Eigen::MatrixXd> llt(pop.Sigma);
    if (llt.info() != Eigen::Success) throw singular_sigma("Sigma is not positive definite");
    const Eigen::MatrixXd L = llt.matrixL();

    const Eigen::Index p = pop.dim();
    LabeledDataset data;
    data.features.resize(p, n0 + n1);
    data.labels.resize(static_cast<std::size_t>(n0 + n1));
    Eigen::MatrixXd Z(p, n0 + n1);
    for (Eigen::Index j = 0; j < n0 + n1; ++j)
        for (Eigen::Index i = 0; i < p; ++i) Z(i, j) = rng.normal();
    data.features.noalias() = L * Z;
    for (Eigen::Index j = 0; j < n0 + n1; ++j) {
        const bool first = j < n0;
        data.features.col(j) += first ? pop.mu0 : pop.mu1;
        data.labels[static_cast<std::size_t>(j)] = first ? 0 : 1;
    }
    return data;
}

}  // namespace nlrlda
