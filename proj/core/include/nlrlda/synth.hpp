#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "nlrlda/dataset.hpp"
#include "nlrlda/population.hpp"

namespace nlrlda {

enum class CovModel { model1 = 1, model2 = 2, model3 = 3 };

/// The three synthetic covariance structures, all with unit diagonal:
///   model1: off-diagonal 0.1
///   model2: AR(0.9), entry (i,j) = 0.9^|i-j|
///   model3: banded, |i-j| in 1..4 -> 0.9, |i-j| in 5..9 -> 0.3, else 0
/// Construction always succeeds. model3 is positive definite only for p <= 5
/// (the band pattern is indefinite beyond that); consumers that factorize it
/// report the failure as singular_sigma rather than patching the matrix.
Eigen::MatrixXd build_cov(CovModel model, Eigen::Index p);

/// Population with mu0 = k*1, mu1 = -mu0, k calibrated to the requested
/// squared Mahalanobis distance.
PopulationModel make_population(CovModel model, Eigen::Index p, double nu_sq);

/// Deterministic per-trial random stream. Seeding is a splitmix64 step:
///   state = seed + (trial_index + 1) * 0x9E3779B97F4A7C15
/// followed by two 33-bit xor-shift multiply rounds; the result seeds a
/// mersenne twister. Normals come from Box-Muller on 53-bit uniforms, so the
/// byte stream is fully determined by (seed, trial_index).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t trial_index);

    double uniform();  // (0, 1]
    double normal();
    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t trial_index);

/// Draw n0 columns from N(mu0, Sigma) then n1 from N(mu1, Sigma), via the
/// Cholesky factor of Sigma. Labels follow the column order.
LabeledDataset sample_gaussian(const PopulationModel& pop, Eigen::Index n0, Eigen::Index n1,
                               RngStream& rng);

}  // namespace nlrlda
