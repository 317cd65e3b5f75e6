#pragma once

#include <Eigen/Dense>

#include "nlrlda/errors.hpp"
#include "nlrlda/population.hpp"

namespace nlrlda {

/// Convention for the aspect ratio c entering the b(z) fixed point.
enum class CConvention { ntilde, n };

/// Solution of the coupled fixed point
///   e = (1/n~) sum_d sigma_d / (x sigma_d - z),  x = 1/(1+e)
/// by damped iteration. Residual at the solution <= 1e-12.
struct ESolution {
    double e = 0.0;
    double x = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

ESolution solve_e(const Eigen::VectorXd& sigma_eigs, double z, double n_tilde);

/// Companion fixed point b = (1/n~) sum_d 1/(sigma_d (1 - c - c z b) - z),
/// with w = 1 - c z b. The sum runs over the p eigenvalues of Sigma.
struct BSolution {
    double b = 0.0;
    double w = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

BSolution solve_b(const Eigen::VectorXd& sigma_eigs, double z, double c, double n_tilde);

/// Everything needed to evaluate the deterministic limits at one z < 0.
/// Derivatives in z come from Richardson-extrapolated central differences of
/// the re-solved fixed points, with the exact chain-rule identities
/// x' = -e'/(1+e)^2 and phi_tilde' = 2 x x' applied where available.
///
/// The variance functional eta is evaluated with the resolvent
/// R(z) = (x(z) Sigma - z I)^-1 throughout. The b/w pair is carried for
/// reference; feeding (w Sigma - z I)^-1 into eta with the printed b equation
/// does not reproduce Monte Carlo averages, while the x-based resolvent does
/// (both trace terms and the correction denominators then share the single
/// scalar x, and 1 - w^2 xi_PP coincides with 1 - phi*phi_tilde).
struct AsymptoticState {
    double z = 0.0;
    double n_tilde = 0.0;
    double c = 0.0;
    Eigen::VectorXd sigma_eigs;   // descending
    Eigen::MatrixXd V;            // eigenvectors of Sigma
    double e = 0.0, x = 0.0, e_prime = 0.0, x_prime = 0.0;
    double phi = 0.0, phi_tilde = 0.0, phi_prime = 0.0, phi_tilde_prime = 0.0;
    double b = 0.0, w = 0.0, b_prime = 0.0, w_prime = 0.0;
    double xi_pp = 0.0, xi_ppp = 0.0, xi_pppp = 0.0;  // (1/n~) tr[Sigma R Sigma R], with R' mixes
};

/// fd_step <= 0 selects the default 1e-5 * max(1, |z|).
AsymptoticState make_state(const Eigen::MatrixXd& Sigma, double z, double n_tilde,
                           CConvention conv = CConvention::ntilde, double fd_step = 0.0);

/// Deterministic equivalent of tr[Theta H Sigma H] for H = S(S+gamma I)^-2:
/// with F(z1,z2) = tr[Theta R1 Sigma R2] / (1 - x1 x2 (1/n~) tr[Sigma R1 Sigma R2]),
/// eta = F + z dF/dz + z^2 d2F/dz1 dz2 at z1 = z2 = z. Linear in Theta.
double eta(const Eigen::MatrixXd& Theta, const AsymptoticState& state, const Eigen::MatrixXd& Sigma);

struct DeterministicRisk {
    double gamma = 0.0;
    double G_tilde_0 = 0.0;
    double G_tilde_1 = 0.0;
    double D_tilde = 0.0;
    double eps_bar_0 = 0.0;
    double eps_bar_1 = 0.0;
    double eps_bar = 0.0;
};

/// Population-side prediction of the classifier's conditional error at one
/// gamma:
///   G~_i = ((-1)^i/2)(x - x'z) [mu' Sigma R^2 mu + (1/n1 - 1/n0) tr(Sigma^2 R^2)]
///   D~   = eta_{mu mu'} + (1/n0 + 1/n1) eta_Sigma
/// assembled into the Phi error formula with tau = log(n1/n0).
DeterministicRisk deterministic_risk(const PopulationModel& pop, Eigen::Index n0, Eigen::Index n1,
                                     double gamma, CConvention conv = CConvention::ntilde);

}  // namespace nlrlda
