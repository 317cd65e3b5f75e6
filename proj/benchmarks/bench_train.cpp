#include <benchmark/benchmark.h>

#include "nlrlda/classifier.hpp"
#include "nlrlda/synth.hpp"

using namespace nlrlda;

namespace {

void BM_train(benchmark::State& state) {
    const Eigen::Index p = state.range(0);
    const PopulationModel pop = make_population(CovModel::model1, p, 5.0);
    RngStream rng(3, 0);
    const LabeledDataset data = sample_gaussian(pop, p, p, rng);
    const GammaGrid grid = GammaGrid::default_grid();
    for (auto _ : state) benchmark::DoNotOptimize(train(data, grid));
}
BENCHMARK(BM_train)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_sample_gaussian(benchmark::State& state) {
    const Eigen::Index p = state.range(0);
    const PopulationModel pop = make_population(CovModel::model1, p, 5.0);
    std::uint64_t trial = 0;
    for (auto _ : state) {
        RngStream rng(4, trial++);
        benchmark::DoNotOptimize(sample_gaussian(pop, 500, 500, rng));
    }
}
BENCHMARK(BM_sample_gaussian)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
