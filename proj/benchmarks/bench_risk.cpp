#include <benchmark/benchmark.h>

#include "nlrlda/risk.hpp"
#include "nlrlda/stats.hpp"
#include "nlrlda/synth.hpp"

using namespace nlrlda;

namespace {

// Full 21-point risk sweep after the one-off factorization; the per-point
// cost should stay O(p) in the spectral representation.
void BM_risk_sweep(benchmark::State& state) {
    const Eigen::Index p = state.range(0);
    const Eigen::Index n = 2 * p;
    const PopulationModel pop = make_population(CovModel::model1, p, 5.0);
    RngStream rng(2, 0);
    const ClassStats st = pooled_covariance(sample_gaussian(pop, n / 2, n / 2, rng));
    const SymEig eig = sym_eig(st.S);
    const Eigen::VectorXd coeff = eig.U.transpose() * (st.m0 - st.m1);
    const double n_tilde = static_cast<double>(st.n_tilde());
    for (auto _ : state) {
        double acc = 0.0;
        for (int j = -10; j <= 10; ++j) {
            const double gamma = std::pow(10.0, 0.5 * j);
            const ResolventStats rs = resolvent_stats(eig.eigenvalues, coeff, gamma, n_tilde);
            acc += consistent_risk(rs, n / 2, n / 2).eps_hat;
        }
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_risk_sweep)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMicrosecond);

}  // namespace
