#include <invcure/bandwidth.hpp>
#include <invcure/fit.hpp>
#include <invcure/inversion.hpp>
#include <invcure/kernel.hpp>
#include <invcure/likelihood.hpp>
#include <invcure/simulation.hpp>

#include <benchmark/benchmark.h>

using namespace invcure;

namespace {

SurvivalDataset design(benchmark::State& state) {
    return simulate(standard_design(CureScenario::cure20, 0.0, static_cast<std::size_t>(state.range(0)), 1));
}

void BM_Subdistributions(benchmark::State& state) {
    const auto data = design(state);
    const KernelSpec spec(fixed_bandwidth(3.0, data.size()));
    for (auto _ : state) benchmark::DoNotOptimize(estimate_subdistributions(data, 0.25, spec));
}
BENCHMARK(BM_Subdistributions)->Arg(150)->Arg(300)->Arg(1000);

void BM_LatencyDistribution(benchmark::State& state) {
    const auto data = design(state);
    const auto sub = estimate_subdistributions(data, 0.25, KernelSpec(fixed_bandwidth(3.0, data.size())));
    for (auto _ : state) benchmark::DoNotOptimize(latency_distribution(sub.censored, sub.events, 0.8, LatencyTail::proper));
}
BENCHMARK(BM_LatencyDistribution)->Arg(150)->Arg(300)->Arg(1000);

void BM_ModelSetup(benchmark::State& state) {
    const auto data = design(state);
    const KernelSpec spec(fixed_bandwidth(3.0, data.size()));
    for (auto _ : state) benchmark::DoNotOptimize(LikelihoodModel(data, spec, CureLink::logistic()));
}
BENCHMARK(BM_ModelSetup)->Arg(150)->Arg(300)->Unit(benchmark::kMicrosecond);

void BM_Loglik(benchmark::State& state) {
    const auto data = design(state);
    const LikelihoodModel m(data, KernelSpec(fixed_bandwidth(3.0, data.size())), CureLink::logistic());
    const Beta b(1.75, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(m.loglik(b));
}
BENCHMARK(BM_Loglik)->Arg(150)->Arg(300)->Arg(1000);

void BM_Score(benchmark::State& state) {
    const auto data = design(state);
    const LikelihoodModel m(data, KernelSpec(fixed_bandwidth(3.0, data.size())), CureLink::logistic());
    const Beta b(1.75, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(m.score(b));
}
BENCHMARK(BM_Score)->Arg(150)->Arg(300)->Arg(1000);

void BM_Fit(benchmark::State& state) {
    const auto data = design(state);
    const KernelSpec spec(fixed_bandwidth(3.0, data.size()));
    for (auto _ : state) benchmark::DoNotOptimize(fit(data, spec, CureLink::logistic()));
}
BENCHMARK(BM_Fit)->Arg(150)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_CrossValidation(benchmark::State& state) {
    const auto data = design(state);
    const auto grid = default_cv_grid(data.size());
    for (auto _ : state) benchmark::DoNotOptimize(cv_select(data, grid));
}
BENCHMARK(BM_CrossValidation)->Arg(150)->Arg(300)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
