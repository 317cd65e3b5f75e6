#include "nlrlda/stats.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace nlrlda {

namespace {

/// Sample indices sorted by (label, lexicographic column). Accumulating in
/// this order makes the moments bit-for-bit invariant under any permutation
/// of the input samples.
std::vector<Eigen::Index> canonical_order(const LabeledDataset& data) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(data.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const int la = data.labels[static_cast<std::size_t>(a)];
        const int lb = data.labels[static_cast<std::size_t>(b)];
        if (la != lb) return la < lb;
        for (Eigen::Index i = 0; i < data.dim(); ++i) {
            if (data.features(i, a) != data.features(i, b))
                return data.features(i, a) < data.features(i, b);
        }
        return false;
    });
    return order;
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_means(const LabeledDataset& data) {
    data.validate();
    const Eigen::Index p = data.dim();
    Eigen::VectorXd m0 = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd m1 = Eigen::VectorXd::Zero(p);
    Eigen::Index c0 = 0, c1 = 0;
    for (Eigen::Index j : canonical_order(data)) {
        if (data.labels[static_cast<std::size_t>(j)] == 0) {
            m0 += data.features.col(j);
            ++c0;
        } else {
            m1 += data.features.col(j);
            ++c1;
        }
    }
    if (c0 == 0) throw empty_class("class 0 has no samples");
    if (c1 == 0) throw empty_class("class 1 has no samples");
    m0 /= static_cast<double>(c0);
    m1 /= static_cast<double>(c1);
    return {m0, m1};
}

ClassStats pooled_covariance(const LabeledDataset& data) {
    data.validate();
    ClassStats st;
    st.n0 = data.count(0);
    st.n1 = data.count(1);
    if (st.n0 < 2 || st.n1 < 2)
        throw insufficient_samples("each class needs at least 2 samples (got " +
                                   std::to_string(st.n0) + " and " + std::to_string(st.n1) + ")");
    auto [m0, m1] = sample_means(data);
    st.m0 = m0;
    st.m1 = m1;
    const Eigen::Index p = data.dim();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index j : canonical_order(data)) {
        const Eigen::VectorXd centered =
            data.features.col(j) - (data.labels[static_cast<std::size_t>(j)] == 0 ? st.m0 : st.m1);
        acc.selfadjointView<Eigen::Lower>().rankUpdate(centered, 1.0);
    }
    acc /= static_cast<double>(st.n_tilde());
    Eigen::MatrixXd S = acc.selfadjointView<Eigen::Lower>();
    st.S = 0.5 * (S + S.transpose());  // exact symmetry before any eigendecomposition
    return st;
}

SymEig sym_eig(const Eigen::MatrixXd& S) {
    if (S.rows() != S.cols()) throw dimension_mismatch("sym_eig needs a square matrix");
    if (!S.allFinite()) throw non_finite_data("sym_eig input contains non-finite values");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
    if (solver.info() != Eigen::Success) throw convergence_failure("eigendecomposition failed");

    const Eigen::Index p = S.rows();
    SymEig out;
    out.eigenvalues.resize(p);
    out.U.resize(p, p);
    // Eigen returns ascending order; flip to descending.
    for (Eigen::Index i = 0; i < p; ++i) {
        out.eigenvalues(i) = solver.eigenvalues()(p - 1 - i);
        out.U.col(i) = solver.eigenvectors().col(p - 1 - i);
    }
    // Zero out numerical noise around rank deficiencies (both signs), so a
    // rank-r input yields exactly p - r zero eigenvalues.
    const double lambda_max = out.eigenvalues.size() > 0 ? out.eigenvalues(0) : 0.0;
    const double clamp_width = 1e-10 * std::max(lambda_max, 0.0);
    for (Eigen::Index i = 0; i < p; ++i)
        if (std::abs(out.eigenvalues(i)) <= clamp_width) out.eigenvalues(i) = 0.0;
    return out;
}

}  // namespace nlrlda
