#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nlrlda/errors.hpp"
#include "nlrlda/stats.hpp"

namespace nlrlda {

/// Standard normal CDF via the complementary error function.
/// Absolute error <= 1e-12 over the real line.
double normal_cdf(double x);

/// Which printed form of the plug-in risk estimator to evaluate. The two
/// differ in the numerator of e_hat (trace of SQ vs SQ^2) and in the
/// normalization of the trace inside theta_G_hat (1/(n-2) vs 1/n). The
/// appendix form is the internally consistent one and the default; the
/// theorem form is kept for side-by-side comparison.
enum class Theorem2Variant { appendix, theorem };

/// Resolvent trace statistics of S at z = -gamma, computed in the eigenbasis.
/// With Q = (S + gamma I)^-1 and m = m0 - m1:
///   t1 = tr[SQ]/n~,  t2 = tr[SQ^2]/n~,
///   q1 = m'QSQm, q2 = m'Q^2SQm, q3 = m'Q^2SQ^2m.
struct ResolventStats {
    double gamma = 0.0;
    double z = 0.0;
    double n_tilde = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    double t3 = 0.0;  // tr[SQ^3]/n~; feeds the theorem-form derivative t2' = 2 t3
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0;
};

ResolventStats resolvent_stats(const SymEig& eig, const Eigen::VectorXd& m, double gamma,
                               double n_tilde);

/// Fast path for grid sweeps: coeff = U' m precomputed once.
ResolventStats resolvent_stats(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& coeff,
                               double gamma, double n_tilde);

/// e_hat = t1/(1-t1) and its z-derivative e_hat' = t2/(1-t1)^2, with
/// x_hat = 1/(1+e_hat), x_hat' = -e_hat'/(1+e_hat)^2.
struct EHat {
    double e_hat = 0.0;
    double e_hat_prime = 0.0;
    double x_hat = 0.0;
    double x_hat_prime = 0.0;
};

/// Throws degenerate_trace if t1 >= 1 (impossible for gamma > 0).
EHat e_hat_quantities(const ResolventStats& rs, Theorem2Variant variant = Theorem2Variant::appendix);

/// Plug-in estimate of tr[Sigma H] for H = S(S+gamma I)^-2. This is the
/// finite-sample bias of the score offset when the class mean is plugged into
/// its own score; epsilon_hat adds theta_G_hat/n_i back to undo it.
/// n is needed only by the theorem variant's trace normalization.
/// Throws degenerate_prime if e_hat' = 0 (S = 0).
double theta_g_hat(const ResolventStats& rs, const EHat& eh,
                   Theorem2Variant variant = Theorem2Variant::appendix, double n = 0.0);

/// Consistent estimator of D = m'H Sigma H m built from data-side traces:
///   D_c = z^2 (1+e)^4 q3 + 2 z (1+e)^2 q2 + ((1+e)^2 + 2 z e'(1+e)) q1.
/// The sign is checked by the caller (D_c <= 0 means a degenerate classifier).
double d_consistent(const ResolventStats& rs, const EHat& eh);

/// Everything the estimator produces at one gamma.
struct ConsistentRisk {
    double gamma = 0.0;
    double e_hat = 0.0;
    double e_hat_prime = 0.0;
    double x_hat = 0.0;
    double x_hat_prime = 0.0;
    double theta_g = 0.0;
    double d_c = 0.0;
    double eps0_hat = 0.0;
    double eps1_hat = 0.0;
    double eps_hat = 0.0;
};

/// Assemble the estimated conditional misclassification probabilities
///   eps0 = Phi((-G0 + theta_G/n0 + tau)/sqrt(D_c)),
///   eps1 = Phi(( G1 + theta_G/n1 - tau)/sqrt(D_c)),
/// where G0 = m'Hm/2 = q1/2, G1 = -q1/2 and tau = log(n1/n0).
/// Throws degenerate_d if D_c <= 0 (caller applies the trivial-rate fallback).
ConsistentRisk consistent_risk(const ResolventStats& rs, Eigen::Index n0, Eigen::Index n1,
                               Theorem2Variant variant = Theorem2Variant::appendix);

}  // namespace nlrlda
