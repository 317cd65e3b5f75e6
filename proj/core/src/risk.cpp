#include "nlrlda/risk.hpp"

#include <cmath>
#include <limits>

namespace nlrlda {

double normal_cdf(double x) {
    const double v = 0.5 * std::erfc(-x * M_SQRT1_2);
    // Keep the value strictly inside (0, 1) even in the far tails.
    if (v <= 0.0) return std::numeric_limits<double>::denorm_min();
    if (v >= 1.0) return std::nextafter(1.0, 0.0);
    return v;
}

ResolventStats resolvent_stats(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& coeff,
                               double gamma, double n_tilde) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw domain_error("gamma must be positive");
    ResolventStats rs;
    rs.gamma = gamma;
    rs.z = -gamma;
    rs.n_tilde = n_tilde;
    for (Eigen::Index d = 0; d < lambdas.size(); ++d) {
        const double l = lambdas(d);
        if (l == 0.0) continue;
        const double r = 1.0 / (l + gamma);
        const double lr = l * r;
        rs.t1 += lr;
        rs.t2 += lr * r;
        rs.t3 += lr * r * r;
        const double c2 = coeff(d) * coeff(d);
        rs.q1 += c2 * lr * r;
        rs.q2 += c2 * lr * r * r;
        rs.q3 += c2 * lr * r * r * r;
    }
    rs.t1 /= n_tilde;
    rs.t2 /= n_tilde;
    rs.t3 /= n_tilde;
    return rs;
}

ResolventStats resolvent_stats(const SymEig& eig, const Eigen::VectorXd& m, double gamma,
                               double n_tilde) {
    if (m.size() != eig.eigenvalues.size()) throw dimension_mismatch("m has wrong length");
    return resolvent_stats(eig.eigenvalues, eig.U.transpose() * m, gamma, n_tilde);
}

EHat e_hat_quantities(const ResolventStats& rs, Theorem2Variant variant) {
    if (rs.t1 >= 1.0)
        throw degenerate_trace("tr[SQ]/n~ = " + std::to_string(rs.t1) +
                               " >= 1; inputs are inconsistent");
    EHat eh;
    const double denom = 1.0 - rs.t1;
    // dQ/dz = Q^2 gives t1' = t2 and t2' = 2 t3, so each form's derivative is
    // exact: (t1/(1-t1))' = t2/(1-t1)^2 and (t2/(1-t1))' = (2 t3 (1-t1) + t2^2)/(1-t1)^2.
    if (variant == Theorem2Variant::appendix) {
        eh.e_hat = rs.t1 / denom;
        eh.e_hat_prime = rs.t2 / (denom * denom);
    } else {
        eh.e_hat = rs.t2 / denom;
        eh.e_hat_prime = (2.0 * rs.t3 * denom + rs.t2 * rs.t2) / (denom * denom);
    }
    eh.x_hat = 1.0 / (1.0 + eh.e_hat);
    eh.x_hat_prime = -eh.e_hat_prime * eh.x_hat * eh.x_hat;
    return eh;
}

double theta_g_hat(const ResolventStats& rs, const EHat& eh, Theorem2Variant variant, double n) {
    if (eh.e_hat_prime <= 0.0)
        throw degenerate_prime("e_hat' = 0; the pooled covariance has no spectrum");
    double trace_term = rs.t2;  // tr[SQ^2]/n~
    if (variant == Theorem2Variant::theorem) {
        if (!(n > 0.0)) throw domain_error("theorem variant needs the total sample count");
        trace_term = rs.t2 * rs.n_tilde / n;  // tr[SQ^2]/n
    }
    const double one_plus = 1.0 + eh.e_hat;
    const double raw =
        (eh.e_hat_prime * (eh.x_hat - rs.z * eh.x_hat_prime) - trace_term) * one_plus * one_plus /
        eh.e_hat_prime;
    // The raw ratio estimates (x - z x') * tr[Sigma^2 (x Sigma - z I)^-2] / n~,
    // an O(1) quantity; the bias it must cancel is tr[Sigma H] = O(p). Scale by
    // n~ so that theta_g_hat/n_i matches the plug-in bias tr[Sigma H]/n_i.
    return rs.n_tilde * raw;
}

double d_consistent(const ResolventStats& rs, const EHat& eh) {
    const double z = rs.z;
    const double u = 1.0 + eh.e_hat;
    const double u2 = u * u;
    return z * z * u2 * u2 * rs.q3 + 2.0 * z * u2 * rs.q2 +
           (u2 + 2.0 * z * eh.e_hat_prime * u) * rs.q1;
}

ConsistentRisk consistent_risk(const ResolventStats& rs, Eigen::Index n0, Eigen::Index n1,
                               Theorem2Variant variant) {
    const EHat eh = e_hat_quantities(rs, variant);
    const double dc = d_consistent(rs, eh);
    ConsistentRisk out;
    out.gamma = rs.gamma;
    out.e_hat = eh.e_hat;
    out.e_hat_prime = eh.e_hat_prime;
    out.x_hat = eh.x_hat;
    out.x_hat_prime = eh.x_hat_prime;
    out.d_c = dc;
    if (!(dc > 0.0)) throw degenerate_d("D_c = " + std::to_string(dc) + " is not positive");
    out.theta_g = theta_g_hat(rs, eh, variant, static_cast<double>(n0 + n1));
    const double tau = std::log(static_cast<double>(n1) / static_cast<double>(n0));
    const double g0 = 0.5 * rs.q1;  // (m0-m1)'H(m0-m1)/2 equals q1/2 identically
    const double sqrt_dc = std::sqrt(dc);
    out.eps0_hat = normal_cdf((-g0 + out.theta_g / static_cast<double>(n0) + tau) / sqrt_dc);
    out.eps1_hat = normal_cdf((-g0 + out.theta_g / static_cast<double>(n1) - tau) / sqrt_dc);
    const double pi0 = static_cast<double>(n0) / static_cast<double>(n0 + n1);
    out.eps_hat = pi0 * out.eps0_hat + (1.0 - pi0) * out.eps1_hat;
    return out;
}

}  // namespace nlrlda
