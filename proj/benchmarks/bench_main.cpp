#include "lplab/distance.hpp"
#include "lplab/estimate.hpp"
#include "lplab/simulate.hpp"

#include <benchmark/benchmark.h>

using namespace lplab;

namespace {

const QarParams kParams{0.5, 0.2, 0.1, 1.0};

void BM_SimulateQar(benchmark::State& state) {
    const auto T = static_cast<Eigen::Index>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_qar(kParams, T, kDefaultBurnIn, 1).y.data());
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateQar)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_FitFeas(benchmark::State& state) {
    const SimulatedPath path = simulate_qar(kParams, state.range(0), kDefaultBurnIn, 2);
    const LpData data = lp_data(path);
    DesignSpec ds;
    ds.spec = SpecKind::Feas;
    ds.h = 5;
    ds.control_lags = 2;
    for (auto _ : state) benchmark::DoNotOptimize(fit_lp(ds, data).coefficients.data());
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitFeas)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_HacLrv(benchmark::State& state) {
    const SimulatedPath path = simulate_qar(kParams, state.range(0), kDefaultBurnIn, 3);
    MatrixXd scores(path.size(), 4);
    scores << path.y, path.s, path.u, path.u.cwiseProduct(path.u);
    const int b = default_bandwidth(path.size());
    for (auto _ : state) benchmark::DoNotOptimize(hac_lrv(scores, b).data());
}
BENCHMARK(BM_HacLrv)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_UnconditionalDistance(benchmark::State& state) {
    const SimulatedPath path = simulate_qar(kParams, 10000, kDefaultBurnIn, 4);
    const auto spec = static_cast<SpecKind>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(unconditional_distance(path, spec, kParams, 10));
}
BENCHMARK(BM_UnconditionalDistance)
    ->Arg(static_cast<int>(SpecKind::Linear))
    ->Arg(static_cast<int>(SpecKind::Feas))
    ->Unit(benchmark::kMicrosecond);

void BM_CarOracle(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(car_oracle(kParams, 2.0, 1.0, 5, 100000, 5).estimate);
}
BENCHMARK(BM_CarOracle)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
