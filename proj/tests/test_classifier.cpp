#include <Eigen/Dense>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "nlrlda/classifier.hpp"
#include "nlrlda/synth.hpp"

using namespace nlrlda;

namespace {

Eigen::MatrixXd random_spd(Eigen::Index p, std::uint64_t seed) {
    RngStream rng(seed, 0);
    Eigen::MatrixXd A(p, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < p; ++i) A(i, j) = rng.normal();
    return A * A.transpose() / static_cast<double>(p);
}

PrecisionOperator scaled_identity(Eigen::Index p, double c) {
    SymEig e;
    e.eigenvalues = Eigen::VectorXd::Ones(p);
    e.U = Eigen::MatrixXd::Identity(p, p);
    // lambda/(lambda+g)^2 = c at lambda=1 gives g = 1/sqrt(c) - 1.
    const double gamma = 1.0 / std::sqrt(c) - 1.0;
    return nl_precision(std::make_shared<const SymEig>(e), RegParam{gamma});
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("score: midpoint symmetry and PSD quadratic form") {
    Eigen::VectorXd m0(2), m1(2), x(2);
    m0 << 1, 0;
    m1 << 0, 1;
    x << 1, 1;
    const auto H = scaled_identity(2, 0.25);
    CHECK(score(x, m0, m1, H) == doctest::Approx(0.0));
    CHECK(score(m0, m0, m1, H) == doctest::Approx(0.25));  // (m'Hm)/2 = 0.25*2/2
    CHECK(score(m0, m0, m1, H) >= 0.0);
}

TEST_CASE("score: affine in x") {
    RngStream rng(40, 0);
    const Eigen::Index p = 7;
    const Eigen::MatrixXd S = random_spd(p, 41);
    const auto H = nl_precision(std::make_shared<const SymEig>(sym_eig(S)), RegParam{0.5});
    Eigen::VectorXd m0(p), m1(p), x1(p), x2(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        m0(i) = rng.normal();
        m1(i) = rng.normal();
        x1(i) = rng.normal();
        x2(i) = rng.normal();
    }
    const double alpha = 0.37;
    const double lhs = score(alpha * x1 + (1 - alpha) * x2, m0, m1, H);
    const double rhs = alpha * score(x1, m0, m1, H) + (1 - alpha) * score(x2, m0, m1, H);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("score_quadratic equals score for 1000 random tuples") {
    RngStream rng(42, 0);
    for (int rep = 0; rep < 1000; ++rep) {
        const Eigen::Index p = 2 + static_cast<Eigen::Index>(rng.raw() % 12);
        Eigen::MatrixXd A(p, p);
        for (Eigen::Index j = 0; j < p; ++j)
            for (Eigen::Index i = 0; i < p; ++i) A(i, j) = rng.normal();
        Eigen::MatrixXd S = A * A.transpose() / static_cast<double>(p);
        if (rep % 3 == 0) S = A.leftCols(p / 2 + 1) * A.leftCols(p / 2 + 1).transpose();
        const double gamma = 0.05 + std::abs(rng.normal());
        Eigen::VectorXd m0(p), m1(p), x(p);
        for (Eigen::Index i = 0; i < p; ++i) {
            m0(i) = rng.normal();
            m1(i) = rng.normal();
            x(i) = rng.normal();
        }
        auto eig = std::make_shared<const SymEig>(sym_eig(S));
        const double w_linear = score(x, m0, m1, nl_precision(eig, RegParam{gamma}));
        const double w_quad = score_quadratic(x, m0, m1, *eig, gamma);
        CHECK(std::abs(w_quad - w_linear) <= 1e-10 * (1.0 + std::abs(w_linear)));
    }
}

TEST_CASE("score_quadratic: equal means and label swap") {
    const Eigen::MatrixXd S = random_spd(6, 50);
    const SymEig eig = sym_eig(S);
    RngStream rng(51, 0);
    Eigen::VectorXd m0(6), m1(6), x(6);
    for (int i = 0; i < 6; ++i) {
        m0(i) = rng.normal();
        m1(i) = rng.normal();
        x(i) = rng.normal();
    }
    CHECK(score_quadratic(x, m0, m0, eig, 1.0) == 0.0);
    CHECK(score_quadratic(x, m0, m1, eig, 1.0) ==
          doctest::Approx(-score_quadratic(x, m1, m0, eig, 1.0)).epsilon(1e-13));
}

TEST_CASE("decide: tie goes to class 1") {
    CHECK(decide(0.0, 0.0) == 1);
    CHECK(decide(1.0, 0.0) == 0);
    CHECK(decide(0.0, std::log(0.3 / 0.7)) == 0);  // tau < 0, so W = 0 > tau
}

TEST_CASE("decide: positive scaling of the score never changes the call at tau = 0") {
    RngStream rng(52, 0);
    for (int i = 0; i < 100; ++i) {
        const double w = rng.normal();
        const double c = std::abs(rng.normal()) + 1e-3;
        CHECK(decide(w, 0.0) == decide(c * w, 0.0));
    }
}

TEST_CASE("bayes_score fixtures") {
    PopulationModel pop;
    pop.Sigma = Eigen::MatrixXd::Identity(2, 2);
    pop.mu0 = Eigen::VectorXd::Zero(2);
    pop.mu0(0) = 1.0;
    pop.mu1 = -pop.mu0;
    CHECK(bayes_score(0.5 * (pop.mu0 + pop.mu1), pop) == doctest::Approx(0.0));
    CHECK(bayes_score(pop.mu0, pop) == doctest::Approx(2.0));
}

TEST_CASE("bayes error matches Phi(-nu/2) at equal priors") {
    const double nu_sq = 2.0;
    const PopulationModel pop = make_population(CovModel::model1, 30, nu_sq);
    RngStream rng(60, 0);
    const LabeledDataset test = sample_gaussian(pop, 20000, 20000, rng);
    Eigen::Index wrong = 0;
    const Eigen::LLT<Eigen::MatrixXd> llt(pop.Sigma);
    const Eigen::VectorXd dir = llt.solve(pop.mu0 - pop.mu1);
    const double offset = 0.5 * (pop.mu0 + pop.mu1).dot(dir);
    for (Eigen::Index j = 0; j < test.size(); ++j) {
        const int pred = decide(test.features.col(j).dot(dir) - offset, 0.0);
        if (pred != test.labels[static_cast<std::size_t>(j)]) ++wrong;
    }
    const double err = static_cast<double>(wrong) / static_cast<double>(test.size());
    CHECK(err == doctest::Approx(normal_cdf(-std::sqrt(nu_sq) / 2.0)).epsilon(0.03));
}

TEST_CASE("oracle_G and oracle_D fixtures") {
    Eigen::VectorXd m0(2), m1(2);
    m0 << 1, 0;
    m1 << 0, 1;
    const auto H = scaled_identity(2, 0.25);
    CHECK(oracle_G(m0, m0, m1, H) == doctest::Approx(0.25));
    CHECK(oracle_G(m1, m0, m1, H) == doctest::Approx(-0.25));
    CHECK(oracle_G(m0, m0, m1, H) + oracle_G(m1, m0, m1, H) == doctest::Approx(0.0));
    CHECK(oracle_D(m0, m1, H, Eigen::MatrixXd::Identity(2, 2)) == doctest::Approx(0.125));
    CHECK(oracle_D(m0, m1, H, Eigen::MatrixXd::Identity(2, 2)) >= 0.0);
}

TEST_CASE("oracle_conditional_error: symmetry and Bayes plug-in") {
    const double nu_sq = 0.5;
    const Eigen::Index p = 25;
    const PopulationModel pop = make_population(CovModel::model1, p, nu_sq);
    ClassStats st;
    st.m0 = pop.mu0;
    st.m1 = pop.mu1;
    st.n0 = st.n1 = 50;
    st.S = pop.Sigma;
    // Plug in H ~= Sigma^-1 via a tiny ridge.
    const auto H = nl_precision(std::make_shared<const SymEig>(sym_eig(pop.Sigma)), RegParam{1e-9});
    const ConditionalError ce = oracle_conditional_error(pop, st, H);
    CHECK(ce.eps0 == doctest::Approx(ce.eps1).epsilon(1e-9));
    CHECK(ce.eps == doctest::Approx(normal_cdf(-std::sqrt(nu_sq) / 2.0)).epsilon(1e-6));
    CHECK(ce.eps == doctest::Approx(0.3618).epsilon(1e-3));
}

TEST_CASE("oracle_conditional_error: degenerate D throws") {
    PopulationModel pop = make_population(CovModel::model1, 4, 1.0);
    ClassStats st;
    st.m0 = st.m1 = pop.mu0;  // m = 0 forces D = 0
    st.n0 = st.n1 = 5;
    const auto H = nl_precision(std::make_shared<const SymEig>(sym_eig(pop.Sigma)), RegParam{1.0});
    CHECK_THROWS_AS(oracle_conditional_error(pop, st, H), degenerate_d);
}

TEST_CASE("default grid endpoints and center") {
    const GammaGrid g = GammaGrid::default_grid();
    REQUIRE(g.values.size() == 21);
    CHECK(g.values.front() == doctest::Approx(1e-5).epsilon(1e-12));
    CHECK(g.values[10] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.values.back() == doctest::Approx(1e5).epsilon(1e-12));
    g.validate();
}

TEST_CASE("train: single-point grid selects that point") {
    const PopulationModel pop = make_population(CovModel::model1, 10, 5.0);
    RngStream rng(70, 0);
    const LabeledDataset data = sample_gaussian(pop, 20, 20, rng);
    GammaGrid grid;
    grid.values = {3.7};
    const TrainedModel model = train(data, grid);
    CHECK(model.gamma_star == 3.7);
    CHECK_FALSE(model.degenerate_fallback);
    CHECK(model.risk_curve.size() == 1);
}

TEST_CASE("train: deterministic given the data and grid") {
    const PopulationModel pop = make_population(CovModel::model2, 12, 2.0);
    RngStream rng(71, 0);
    const LabeledDataset data = sample_gaussian(pop, 15, 25, rng);
    const TrainedModel a = train(data, GammaGrid::default_grid());
    const TrainedModel b = train(data, GammaGrid::default_grid());
    CHECK(a.gamma_star == b.gamma_star);
    CHECK(a.tau_hat == b.tau_hat);
    REQUIRE(a.risk_curve.size() == b.risk_curve.size());
    for (std::size_t i = 0; i < a.risk_curve.size(); ++i)
        CHECK(a.risk_curve[i].eps_hat == b.risk_curve[i].eps_hat);
}

TEST_CASE("train: relabeling flips scores and tau") {
    const PopulationModel pop = make_population(CovModel::model1, 8, 3.0);
    RngStream rng(72, 0);
    LabeledDataset data = sample_gaussian(pop, 12, 20, rng);
    const TrainedModel a = train(data, GammaGrid::default_grid());

    LabeledDataset flipped = data;
    for (auto& l : flipped.labels) l = 1 - l;
    const TrainedModel b = train(flipped, GammaGrid::default_grid());

    CHECK(a.gamma_star == b.gamma_star);  // estimated risk is relabel-invariant
    CHECK(b.tau_hat == doctest::Approx(-a.tau_hat).epsilon(1e-14));
    const auto sa = predict_scores(a, data.features);
    const auto sb = predict_scores(b, data.features);
    for (std::size_t j = 0; j < sa.size(); ++j)
        CHECK(sb[j] == doctest::Approx(-sa[j]).epsilon(1e-12));
    const auto la = predict(a, data.features);
    const auto lb = predict(b, data.features);
    int disagreements = 0;
    for (std::size_t j = 0; j < la.size(); ++j)
        if (lb[j] != 1 - la[j]) ++disagreements;
    // Exact ties (W == tau) would break the flip; they have probability zero here.
    CHECK(disagreements == 0);
}

TEST_CASE("predict: class means classify to their own classes") {
    PopulationModel pop = make_population(CovModel::model1, 10, 9.0);
    RngStream rng(73, 0);
    const LabeledDataset data = sample_gaussian(pop, 40, 40, rng);
    const TrainedModel model = train(data, GammaGrid::default_grid());
    Eigen::MatrixXd X(10, 2);
    X.col(0) = model.m0;
    X.col(1) = model.m1;
    const auto labels = predict(model, X);
    CHECK(labels[0] == 0);
    CHECK(labels[1] == 1);
    CHECK(predict(model, X) == predict(model, X));
}

TEST_CASE("predict: empirical error close to the oracle conditional error") {
    const Eigen::Index p = 50;
    const PopulationModel pop = make_population(CovModel::model1, p, 5.0);
    RngStream rng(74, 0);
    const LabeledDataset data = sample_gaussian(pop, 100, 100, rng);
    const TrainedModel model = train(data, GammaGrid::default_grid());
    ClassStats st;
    st.m0 = model.m0;
    st.m1 = model.m1;
    st.n0 = model.n0;
    st.n1 = model.n1;
    const ConditionalError ce = oracle_conditional_error(pop, st, model.precision());

    const LabeledDataset test = sample_gaussian(pop, 5000, 5000, rng);
    const auto labels = predict(model, test.features);
    Eigen::Index wrong = 0;
    for (Eigen::Index j = 0; j < test.size(); ++j)
        if (labels[static_cast<std::size_t>(j)] != test.labels[static_cast<std::size_t>(j)]) ++wrong;
    const double emp = static_cast<double>(wrong) / static_cast<double>(test.size());
    CHECK(std::abs(emp - ce.eps) <= 0.01);
}

TEST_CASE("train: degenerate data falls back to the prior rule") {
    // Identical class means make m = 0, so D_c = 0 at every grid point.
    Eigen::MatrixXd X(3, 6);
    X << 1, 2, 3, 1, 2, 3,
         0, 1, 0, 0, 1, 0,
         2, 2, 5, 2, 2, 5;
    LabeledDataset data;
    data.features = X;
    data.labels = {0, 0, 0, 1, 1, 1};
    const TrainedModel model = train(data, GammaGrid::default_grid());
    CHECK(model.degenerate_fallback);
    for (const auto& pt : model.risk_curve) CHECK(pt.degenerate);
    const auto labels = predict(model, X);
    for (int l : labels) CHECK(l == 1);  // equal priors tie to class 1
}

TEST_CASE("model persistence round-trips predictions bit-exactly") {
    const PopulationModel pop = make_population(CovModel::model2, 15, 4.0);
    RngStream rng(75, 0);
    const LabeledDataset data = sample_gaussian(pop, 30, 18, rng);
    const TrainedModel model = train(data, GammaGrid::default_grid());

    const std::string path = temp_path("nlrlda_model_roundtrip.json");
    save_model(model, path);
    const TrainedModel loaded = load_model(path);
    std::remove(path.c_str());

    CHECK(loaded.gamma_star == model.gamma_star);
    CHECK(loaded.tau_hat == model.tau_hat);
    CHECK(loaded.n0 == model.n0);
    CHECK(loaded.risk_curve.size() == model.risk_curve.size());

    const LabeledDataset probe = sample_gaussian(pop, 50, 50, rng);
    const auto s1 = predict_scores(model, probe.features);
    const auto s2 = predict_scores(loaded, probe.features);
    for (std::size_t j = 0; j < s1.size(); ++j) CHECK(s1[j] == s2[j]);  // bit-exact
    CHECK(predict(model, probe.features) == predict(loaded, probe.features));
}
