#include <benchmark/benchmark.h>

#include "nlrlda/precision.hpp"
#include "nlrlda/stats.hpp"
#include "nlrlda/synth.hpp"

using namespace nlrlda;

namespace {

ClassStats stats_for(Eigen::Index p, Eigen::Index n) {
    const PopulationModel pop = make_population(CovModel::model1, p, 5.0);
    RngStream rng(1, 0);
    return pooled_covariance(sample_gaussian(pop, n / 2, n / 2, rng));
}

void BM_sym_eig(benchmark::State& state) {
    const Eigen::Index p = state.range(0);
    const ClassStats st = stats_for(p, 2 * p);
    for (auto _ : state) benchmark::DoNotOptimize(sym_eig(st.S));
}
BENCHMARK(BM_sym_eig)->Arg(50)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_nl_apply(benchmark::State& state) {
    const Eigen::Index p = state.range(0);
    const ClassStats st = stats_for(p, 2 * p);
    auto eig = std::make_shared<const SymEig>(sym_eig(st.S));
    const PrecisionOperator H = nl_precision(eig, RegParam{1.0});
    const Eigen::VectorXd m = st.m0 - st.m1;
    for (auto _ : state) benchmark::DoNotOptimize(H.apply(m));
}
BENCHMARK(BM_nl_apply)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);

}  // namespace
