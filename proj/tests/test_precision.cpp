#include <Eigen/Dense>

#include "doctest.h"
#include "nlrlda/precision.hpp"
#include "nlrlda/synth.hpp"

using namespace nlrlda;

namespace {

std::shared_ptr<const SymEig> eig_of(const Eigen::MatrixXd& S) {
    return std::make_shared<const SymEig>(sym_eig(S));
}

Eigen::MatrixXd random_spd(Eigen::Index p, std::uint64_t seed) {
    RngStream rng(seed, 0);
    Eigen::MatrixXd A(p, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < p; ++i) A(i, j) = rng.normal();
    return A * A.transpose() / static_cast<double>(p) +
           0.5 * Eigen::MatrixXd::Identity(p, p);
}

/// Independent route: S (S + gamma I)^-2 by two dense linear solves.
Eigen::MatrixXd nl_by_solves(const Eigen::MatrixXd& S, double gamma) {
    const Eigen::MatrixXd M = S + gamma * Eigen::MatrixXd::Identity(S.rows(), S.cols());
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    return llt.solve(llt.solve(S));
}

}  // namespace

TEST_CASE("nl_precision: identity and singular fixtures") {
    const auto H1 = nl_precision(eig_of(Eigen::MatrixXd::Identity(3, 3)), RegParam{1.0});
    CHECK((H1.materialize() - 0.25 * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <=
          1e-14);

    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
    D(1, 1) = 2.0;
    const auto H2 = nl_precision(eig_of(D), RegParam{1.0});
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2, 2);
    expected(1, 1) = 2.0 / 9.0;
    CHECK((H2.materialize() - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("nl_precision: small gamma approaches the true inverse") {
    const Eigen::MatrixXd S = random_spd(12, 21);
    const Eigen::MatrixXd Sinv = S.inverse();
    const auto H = nl_precision(eig_of(S), RegParam{1e-8});
    CHECK((H.materialize() - Sinv).norm() / Sinv.norm() <= 1e-4);
}

TEST_CASE("nl_precision: eigen route equals the solve route") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        Eigen::MatrixXd S = random_spd(15, seed);
        if (seed == 3) {  // make it singular PSD
            RngStream rng(seed, 5);
            Eigen::MatrixXd A(15, 4);
            for (int j = 0; j < 4; ++j)
                for (int i = 0; i < 15; ++i) A(i, j) = rng.normal();
            S = A * A.transpose();
        }
        for (double gamma : {0.05, 1.0, 30.0}) {
            const auto H = nl_precision(eig_of(S), RegParam{gamma});
            const Eigen::MatrixXd ref = nl_by_solves(S, gamma);
            CHECK((H.materialize() - ref).norm() / ref.norm() <= 1e-10);
        }
    }
}

TEST_CASE("nl_precision: gamma^2 H approaches S as gamma grows") {
    const Eigen::MatrixXd S = random_spd(10, 4);
    const double gamma = 1e8;
    const auto H = nl_precision(eig_of(S), RegParam{gamma});
    const Eigen::MatrixXd scaled = gamma * gamma * H.materialize();
    CHECK((scaled - S).norm() / S.norm() <= 1e-6);
}

TEST_CASE("nl_precision: commutes with S") {
    const Eigen::MatrixXd S = random_spd(14, 6);
    const auto H = nl_precision(eig_of(S), RegParam{0.7});
    const Eigen::MatrixXd HM = H.materialize();
    const double bound = 1e-10 * S.norm() * HM.norm();
    CHECK((HM * S - S * HM).cwiseAbs().maxCoeff() <= bound);
}

TEST_CASE("nl_precision: apply matches materialize") {
    const Eigen::MatrixXd S = random_spd(9, 8);
    const auto H = nl_precision(eig_of(S), RegParam{2.0});
    RngStream rng(99, 0);
    Eigen::VectorXd v(9);
    for (int i = 0; i < 9; ++i) v(i) = rng.normal();
    CHECK((H.apply(v) - H.materialize() * v).norm() <= 1e-12 * v.norm());
}

TEST_CASE("ridge_precision fixtures") {
    const Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(2, 2);
    CHECK((ridge_precision(I2, 1.0, PrecisionKind::LinearB).materialize() - 0.5 * I2)
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
    CHECK((ridge_precision(I2, 0.5, PrecisionKind::LinearTarget, I2).materialize() - I2)
              .cwiseAbs()
              .maxCoeff() <= 1e-12);

    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
    D(0, 0) = 4.0;
    D(1, 1) = 1.0;
    const Eigen::MatrixXd HA = ridge_precision(D, 1.0, PrecisionKind::LinearA).materialize();
    CHECK(HA(0, 0) == doctest::Approx(0.2));
    CHECK(HA(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("ridge_precision: domain checks") {
    const Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(ridge_precision(I2, -1.0, PrecisionKind::LinearA), domain_error);
    CHECK_THROWS_AS(ridge_precision(I2, 1.5, PrecisionKind::LinearTarget, I2), domain_error);
    Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(2, 2);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(
        ridge_precision(singular, 0.5, PrecisionKind::LinearTarget, Eigen::MatrixXd::Zero(2, 2)),
        singular_target);
}

TEST_CASE("ridge_precision: LinearTarget defaults to diag(S)") {
    const Eigen::MatrixXd S = random_spd(6, 31);
    const double gamma = 0.3;
    const Eigen::MatrixXd H = ridge_precision(S, gamma, PrecisionKind::LinearTarget).materialize();
    Eigen::MatrixXd combined = gamma * S;
    combined.diagonal() += (1.0 - gamma) * S.diagonal();
    CHECK((H * combined - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("filter_coeff fixtures and monotonicity") {
    CHECK(filter_coeff(1.0, 1.0, PrecisionKind::NL) == doctest::Approx(0.25));
    CHECK(filter_coeff(3.0, 1.0, PrecisionKind::NL) == doctest::Approx(9.0 / 16.0));
    CHECK(filter_coeff(0.0, 2.7, PrecisionKind::NL) == 0.0);
    CHECK(filter_coeff(1.0, 1.0, PrecisionKind::LinearB) == doctest::Approx(0.5));

    RngStream rng(55, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const double l1 = std::abs(rng.normal()) * 3.0;
        const double l2 = l1 + std::abs(rng.normal());
        const double g1 = std::abs(rng.normal()) + 0.1;
        const double g2 = g1 + std::abs(rng.normal());
        for (PrecisionKind k : {PrecisionKind::NL, PrecisionKind::LinearB}) {
            CHECK(filter_coeff(l2, g1, k) >= filter_coeff(l1, g1, k));  // nondecreasing in lambda
            if (l1 > 0.0)
                CHECK(filter_coeff(l1, g2, k) <= filter_coeff(l1, g1, k));  // nonincreasing in gamma
            CHECK(filter_coeff(l1, g1, k) >= 0.0);
            CHECK(filter_coeff(l1, g1, k) < 1.0);
        }
    }
}

TEST_CASE("contribution_ratios fixtures") {
    Eigen::VectorXd l(2);
    l << 4.0, 1.0;
    const auto [rho_l, rho_nl] = contribution_ratios(l, 1.0);
    CHECK(rho_l(0) == doctest::Approx(1.0));
    CHECK(rho_l(1) == doctest::Approx(0.625));
    CHECK(rho_nl(1) == doctest::Approx(0.390625));

    Eigen::VectorXd eq(2);
    eq << 3.3, 3.3;
    const auto [rl, rn] = contribution_ratios(eq, 0.4);
    CHECK(rl(1) == doctest::Approx(1.0));
    CHECK(rn(1) == doctest::Approx(1.0));

    Eigen::VectorXd withzero(3);
    withzero << 2.0, 1.0, 0.0;
    const auto [rl0, rn0] = contribution_ratios(withzero, 0.9);
    CHECK(rl0(2) == 0.0);
    CHECK(rn0(2) == 0.0);

    CHECK_THROWS_AS(contribution_ratios(Eigen::VectorXd::Zero(3), 1.0), all_zero_spectrum);
}

TEST_CASE("contribution_ratios: rho_nl = rho_l^2 <= rho_l <= 1") {
    RngStream rng(77, 0);
    Eigen::VectorXd l(10);
    for (int i = 0; i < 10; ++i) l(i) = std::abs(rng.normal());
    std::sort(l.data(), l.data() + 10, std::greater<double>());
    const auto [rho_l, rho_nl] = contribution_ratios(l, 0.31);
    for (int d = 0; d < 10; ++d) {
        CHECK(rho_nl(d) == rho_l(d) * rho_l(d));
        CHECK(rho_nl(d) <= rho_l(d) + 1e-15);
        CHECK(rho_l(d) <= 1.0 + 1e-15);
    }
}
