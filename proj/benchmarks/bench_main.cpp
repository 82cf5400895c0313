#include <benchmark/benchmark.h>

#include "wfpd/chain.hpp"
#include "wfpd/diffusion.hpp"
#include "wfpd/generators.hpp"
#include "wfpd/oracle.hpp"

using namespace wfpd;

namespace {

const Params kP13 = validate_params(1.0, 0.3, Regime::General);

void BM_ChainStep(benchmark::State& state) {
    const int K = static_cast<int>(state.range(0));
    const std::int64_t N = 2000;
    const KernelConfig cfg(kP13, K, N);
    RandomStream rng(1);
    DiscreteSimplexState s = DiscreteSimplexState::balanced(K, N);
    for (auto _ : state) {
        s = chain_step(s, cfg, rng);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_ChainStep)->Arg(4)->Arg(20)->Arg(100);

void BM_DiffusionStep(benchmark::State& state) {
    const int K = static_cast<int>(state.range(0));
    const DiffusionConfig cfg = DiffusionConfig::with_default_dt(kP13, K, 1.0, 1);
    RandomStream rng(1);
    SimplexState z = SimplexState::uniform(K);
    for (auto _ : state) {
        z = diffusion_step(z, cfg, rng);
        benchmark::DoNotOptimize(z);
    }
}
BENCHMARK(BM_DiffusionStep)->Arg(10)->Arg(100)->Arg(300);

void BM_BKPhi(benchmark::State& state) {
    const int K = static_cast<int>(state.range(0));
    RandomStream rng(2);
    RankedStateSampler sampler(kP13, K, rng);
    const RankedState z = sampler.next();
    for (auto _ : state) {
        benchmark::DoNotOptimize(BK_phi(z, 2.5, kP13, K));
    }
}
BENCHMARK(BM_BKPhi)->Arg(8)->Arg(64)->Arg(512);

void BM_BKPhiSharedContext(benchmark::State& state) {
    const int K = static_cast<int>(state.range(0));
    RandomStream rng(2);
    RankedStateSampler sampler(kP13, K, rng);
    const RankedState z = sampler.next();
    for (auto _ : state) {
        const BkContext ctx(z, kP13, K);
        double sum = 0.0;
        for (double m : {2.1, 2.5, 2.9}) sum += BK_phi(ctx, m);
        benchmark::DoNotOptimize(sum);
    }
}
BENCHMARK(BM_BKPhiSharedContext)->Arg(8)->Arg(64)->Arg(512);

void BM_PdSample(benchmark::State& state) {
    RandomStream rng(3);
    StickOptions opts;
    opts.residual_tol = 1e-8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_pd(kP13, 5, rng, opts));
    }
}
BENCHMARK(BM_PdSample);

}  // namespace

BENCHMARK_MAIN();
