#include <benchmark/benchmark.h>

#include <vector>

#include "riskbound/riskbound.hpp"

namespace rb = riskbound;

namespace {

rb::SampleBatch make_batch(int n, std::uint64_t seed) {
    rb::SplitMix64 rng(seed);
    std::vector<double> v;
    rb::DistributionSpec(rb::Normal{0.0, 1.0}).sample_n(rng, n, v);
    return rb::SampleBatch(std::move(v));
}

void BM_EmpiricalCvar(benchmark::State& state) {
    const rb::SampleBatch batch = make_batch(static_cast<int>(state.range(0)), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rb::empirical_cvar(batch, 0.1).value);
    }
}
BENCHMARK(BM_EmpiricalCvar)->Arg(1000)->Arg(100000);

void BM_RelaxedCvarPrimal(benchmark::State& state) {
    const rb::SampleBatch batch = make_batch(static_cast<int>(state.range(0)), 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rb::relaxed_cvar_primal(batch, 0.1, 0.05));
    }
}
BENCHMARK(BM_RelaxedCvarPrimal)->Arg(1000)->Arg(100000);

void BM_NumericCvarOracle(benchmark::State& state) {
    const rb::DistributionSpec spec(rb::Normal{0.0, 1.0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(rb::numeric_cvar_oracle(spec, 0.1));
    }
}
BENCHMARK(BM_NumericCvarOracle);

void BM_CoverageTrialBatch(benchmark::State& state) {
    const rb::DistributionSpec spec(rb::Uniform01{});
    const rb::RiskParams params{0.1, 0.05, 1000};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            rb::coverage_experiment(spec, params, rb::Theorem4Bound{}, 8, 42));
    }
}
BENCHMARK(BM_CoverageTrialBatch);

}  // namespace

BENCHMARK_MAIN();
