#include "nlrlda/asymptotics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "nlrlda/risk.hpp"

namespace nlrlda {

namespace {

constexpr double kFixedPointTol = 1e-12;
constexpr int kFixedPointMaxIter = 10000;
constexpr Eigen::Index kDeskScaleCap = 500;

double e_map(const Eigen::VectorXd& sig, double z, double n_tilde, double e) {
    const double x = 1.0 / (1.0 + e);
    double acc = 0.0;
    for (Eigen::Index d = 0; d < sig.size(); ++d) acc += sig(d) / (x * sig(d) - z);
    return acc / n_tilde;
}

double b_map(const Eigen::VectorXd& sig, double z, double c, double n_tilde, double b) {
    const double shrink = 1.0 - c - c * z * b;
    double acc = 0.0;
    for (Eigen::Index d = 0; d < sig.size(); ++d) acc += 1.0 / (sig(d) * shrink - z);
    return acc / n_tilde;
}

/// Damped iteration x_{k+1} = (1-a) x_k + a T(x_k) with the relaxation factor
/// halved whenever the residual grows and slowly restored when it shrinks.
template <typename Map>
std::pair<double, int> damped_fixed_point(Map&& map, double start, const char* what) {
    double x = start;
    double alpha = 0.5;
    double prev_res = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= kFixedPointMaxIter; ++it) {
        const double fx = map(x);
        const double res = std::abs(fx - x);
        if (res <= kFixedPointTol * std::max(1.0, std::abs(fx))) return {fx, it};
        if (res > prev_res)
            alpha = std::max(0.05, 0.5 * alpha);
        else
            alpha = std::min(1.0, 1.1 * alpha);
        prev_res = res;
        x = (1.0 - alpha) * x + alpha * fx;
    }
    throw no_convergence(std::string(what) + " fixed point did not converge", prev_res);
}

/// Richardson-extrapolated central difference: (4 D(h/2) - D(h)) / 3.
template <typename F>
double richardson_derivative(F&& f, double z, double h) {
    const double d1 = (f(z + h) - f(z - h)) / (2.0 * h);
    const double d2 = (f(z + 0.5 * h) - f(z - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

struct SpectralEta {
    // All sums use the resolvent R = (x Sigma - z I)^-1 and its z-derivative
    // R' = -R (x' Sigma - I) R, both diagonal in the eigenbasis of Sigma.
    double n = 0.0, n1 = 0.0, n11 = 0.0;        // tr[Theta R Sigma R] and R' mixes
    double delta = 0.0, d1 = 0.0, d11 = 0.0;    // 1 - x^2 xi and its z1 (and z1,z2) derivatives
};

SpectralEta eta_sums(const Eigen::VectorXd& theta_diag, const AsymptoticState& st) {
    SpectralEta s;
    double n = 0.0, n1 = 0.0, n11 = 0.0;
    for (Eigen::Index d = 0; d < st.sigma_eigs.size(); ++d) {
        const double sig = st.sigma_eigs(d);
        const double den = st.x * sig - st.z;
        const double rp = 1.0 - st.x_prime * sig;  // numerator of R' spectrum
        const double base = theta_diag(d) * sig / (den * den);
        n += base;
        n1 += base * rp / den;
        n11 += base * rp * rp / (den * den);
    }
    s.n = n;
    s.n1 = n1;
    s.n11 = n11;
    s.delta = 1.0 - st.x * st.x * st.xi_pp;
    s.d1 = -(st.x_prime * st.x * st.xi_pp + st.x * st.x * st.xi_ppp);
    s.d11 = -(st.x_prime * st.x_prime * st.xi_pp + 2.0 * st.x * st.x_prime * st.xi_ppp +
              st.x * st.x * st.xi_pppp);
    return s;
}

double eta_from_sums(const SpectralEta& s, double z) {
    const double F = s.n / s.delta;
    const double dF = 2.0 * (s.n1 * s.delta - s.n * s.d1) / (s.delta * s.delta);
    const double d2F = s.n11 / s.delta - 2.0 * s.n1 * s.d1 / (s.delta * s.delta) -
                       s.n * s.d11 / (s.delta * s.delta) +
                       2.0 * s.n * s.d1 * s.d1 / (s.delta * s.delta * s.delta);
    return F + z * dF + z * z * d2F;
}

}  // namespace

ESolution solve_e(const Eigen::VectorXd& sigma_eigs, double z, double n_tilde) {
    if (!(z < 0.0)) throw domain_error("solve_e needs z < 0");
    for (Eigen::Index d = 0; d < sigma_eigs.size(); ++d)
        if (sigma_eigs(d) < 0.0) throw domain_error("solve_e needs nonnegative eigenvalues");
    auto [e, iters] =
        damped_fixed_point([&](double e) { return e_map(sigma_eigs, z, n_tilde, e); }, 0.5, "e(z)");
    ESolution sol;
    sol.e = e;
    sol.x = 1.0 / (1.0 + e);
    sol.residual = std::abs(e_map(sigma_eigs, z, n_tilde, e) - e);
    sol.iterations = iters;
    return sol;
}

BSolution solve_b(const Eigen::VectorXd& sigma_eigs, double z, double c, double n_tilde) {
    if (!(z < 0.0)) throw domain_error("solve_b needs z < 0");
    auto [b, iters] = damped_fixed_point(
        [&](double b) { return b_map(sigma_eigs, z, c, n_tilde, b); }, 0.1, "b(z)");
    BSolution sol;
    sol.b = b;
    sol.w = 1.0 - c * z * b;
    sol.residual = std::abs(b_map(sigma_eigs, z, c, n_tilde, b) - b);
    sol.iterations = iters;
    return sol;
}

AsymptoticState make_state(const Eigen::MatrixXd& Sigma, double z, double n_tilde,
                           CConvention conv, double fd_step) {
    const Eigen::Index p = Sigma.rows();
    if (p > kDeskScaleCap)
        throw domain_error("asymptotic oracle is desk-scale only (p <= " +
                           std::to_string(kDeskScaleCap) + ")");
    if (!(z < 0.0)) throw domain_error("make_state needs z < 0");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Sigma);
    if (solver.info() != Eigen::Success) throw convergence_failure("eigendecomposition failed");

    AsymptoticState st;
    st.z = z;
    st.n_tilde = n_tilde;
    st.c = static_cast<double>(p) / (conv == CConvention::ntilde ? n_tilde : n_tilde + 2.0);
    st.sigma_eigs.resize(p);
    st.V.resize(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        st.sigma_eigs(i) = std::max(0.0, solver.eigenvalues()(p - 1 - i));
        st.V.col(i) = solver.eigenvectors().col(p - 1 - i);
    }

    const ESolution es = solve_e(st.sigma_eigs, z, n_tilde);
    st.e = es.e;
    st.x = es.x;

    // Keep z +/- h strictly negative, even at the small-gamma end of a grid.
    double h = fd_step > 0.0 ? fd_step : 1e-5 * std::max(1.0, std::abs(z));
    h = std::min(h, 0.5 * std::abs(z));
    st.e_prime = richardson_derivative(
        [&](double zz) { return solve_e(st.sigma_eigs, zz, n_tilde).e; }, z, h);
    st.x_prime = -st.e_prime / ((1.0 + st.e) * (1.0 + st.e));

    auto phi_at = [&](double zz) {
        const double x = solve_e(st.sigma_eigs, zz, n_tilde).x;
        double acc = 0.0;
        for (Eigen::Index d = 0; d < p; ++d) {
            const double den = x * st.sigma_eigs(d) - zz;
            acc += st.sigma_eigs(d) * st.sigma_eigs(d) / (den * den);
        }
        return acc / n_tilde;
    };
    st.phi = phi_at(z);
    st.phi_tilde = st.x * st.x;
    st.phi_prime = richardson_derivative(phi_at, z, h);
    st.phi_tilde_prime = 2.0 * st.x * st.x_prime;

    const BSolution bs = solve_b(st.sigma_eigs, z, st.c, n_tilde);
    st.b = bs.b;
    st.w = bs.w;
    st.b_prime = richardson_derivative(
        [&](double zz) { return solve_b(st.sigma_eigs, zz, st.c, n_tilde).b; }, z, h);
    st.w_prime = -st.c * (st.b + z * st.b_prime);

    for (Eigen::Index d = 0; d < p; ++d) {
        const double sig = st.sigma_eigs(d);
        const double den = st.x * sig - z;
        const double rp = 1.0 - st.x_prime * sig;
        const double s2 = sig * sig;
        st.xi_pp += s2 / (den * den);
        st.xi_ppp += s2 * rp / (den * den * den);
        st.xi_pppp += s2 * rp * rp / (den * den * den * den);
    }
    st.xi_pp /= n_tilde;
    st.xi_ppp /= n_tilde;
    st.xi_pppp /= n_tilde;
    return st;
}

double eta(const Eigen::MatrixXd& Theta, const AsymptoticState& state,
           const Eigen::MatrixXd& Sigma) {
    const Eigen::Index p = state.sigma_eigs.size();
    if (Theta.rows() != p || Theta.cols() != p || Sigma.rows() != p)
        throw dimension_mismatch("eta: dimension mismatch with state");
    const Eigen::VectorXd theta_diag = (state.V.transpose() * Theta * state.V).diagonal();
    return eta_from_sums(eta_sums(theta_diag, state), state.z);
}

DeterministicRisk deterministic_risk(const PopulationModel& pop, Eigen::Index n0, Eigen::Index n1,
                                     double gamma, CConvention conv) {
    if (!(gamma > 0.0)) throw domain_error("gamma must be positive");
    const double n_tilde = static_cast<double>(n0 + n1 - 2);
    const AsymptoticState st = make_state(pop.Sigma, -gamma, n_tilde, conv);

    const Eigen::VectorXd mu = pop.mu0 - pop.mu1;
    const Eigen::VectorXd mu_t = st.V.transpose() * mu;

    double mu_quad = 0.0, trace_quad = 0.0;
    for (Eigen::Index d = 0; d < st.sigma_eigs.size(); ++d) {
        const double sig = st.sigma_eigs(d);
        const double den = st.x * sig - st.z;
        mu_quad += mu_t(d) * mu_t(d) * sig / (den * den);
        trace_quad += sig * sig / (den * den);
    }
    const double inv_n0 = 1.0 / static_cast<double>(n0);
    const double inv_n1 = 1.0 / static_cast<double>(n1);
    const double scale = 0.5 * (st.x - st.x_prime * st.z);
    const double bracket = mu_quad + (inv_n1 - inv_n0) * trace_quad;

    DeterministicRisk out;
    out.gamma = gamma;
    out.G_tilde_0 = scale * bracket;
    out.G_tilde_1 = -scale * bracket;

    const Eigen::VectorXd theta_mu = mu_t.cwiseProduct(mu_t);
    const double eta_mu = eta_from_sums(eta_sums(theta_mu, st), st.z);
    const double eta_sigma = eta_from_sums(eta_sums(st.sigma_eigs, st), st.z);
    out.D_tilde = eta_mu + (inv_n0 + inv_n1) * eta_sigma;
    if (!(out.D_tilde > 0.0))
        throw degenerate_d("D_tilde = " + std::to_string(out.D_tilde) + " is not positive");

    const double tau = std::log(static_cast<double>(n1) / static_cast<double>(n0));
    const double sd = std::sqrt(out.D_tilde);
    out.eps_bar_0 = normal_cdf((-out.G_tilde_0 + tau) / sd);
    out.eps_bar_1 = normal_cdf((out.G_tilde_1 - tau) / sd);
    const double pi0 = static_cast<double>(n0) / static_cast<double>(n0 + n1);
    out.eps_bar = pi0 * out.eps_bar_0 + (1.0 - pi0) * out.eps_bar_1;
    return out;
}

}  // namespace nlrlda
