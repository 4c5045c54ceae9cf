#include <cmath>

#include <benchmark/benchmark.h>

#include "paircredit/jointlaw.hpp"
#include "paircredit/mc_oracle.hpp"
#include "paircredit/pricing.hpp"
#include "paircredit/specfun.hpp"

using namespace paircredit;

namespace {

const FirmParams kUnderlying{100.0, 100.0 * std::exp(-0.8), 0.0, 0.2, 0.0};
const FirmParams kCounterparty{100.0, 100.0 * std::exp(-1.2), 0.0, 0.3, 0.0};
const MarketParams kMarket{0.05, 0.4};
const CdsContract kCds{1.0, 0.4, 0.4, 0.02, 5.0};

PricingSpec serial() {
    PricingSpec s;
    s.quad.threads = 1;
    return s;
}

void BM_LogBessel(benchmark::State& state) {
    const double order = static_cast<double>(state.range(0)) + 0.37;
    double x = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_bessel_i(order, x));
        x = x < 80.0 ? x * 1.7 : 0.5;
    }
}
BENCHMARK(BM_LogBessel)->Arg(0)->Arg(5)->Arg(40);

void BM_HittingDensity(benchmark::State& state) {
    const WedgeDensityParams p{derive_wedge(kUnderlying, kCounterparty, kMarket), {}, GirsanovExponent::hitting_time,
                               5.0};
    double t = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hitting_density_horizontal(t, 1.5, p));
        t = t < 5.0 ? t + 0.37 : 0.3;
    }
}
BENCHMARK(BM_HittingDensity);

void BM_SurvivalProbability(benchmark::State& state) {
    const WedgeDensityParams p{derive_wedge(kUnderlying, kCounterparty, kMarket), {}, GirsanovExponent::hitting_time,
                               5.0};
    QuadSpec q;
    q.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(survival_prob(5.0, p, q).value);
}
BENCHMARK(BM_SurvivalProbability)->Unit(benchmark::kMillisecond);

void BM_CounterpartyLeg(benchmark::State& state) {
    const PairModel pair = make_pair_model(kUnderlying, kCounterparty, kMarket);
    for (auto _ : state) benchmark::DoNotOptimize(counterparty_default_leg(pair, kCds, serial()).value);
}
BENCHMARK(BM_CounterpartyLeg)->Unit(benchmark::kMillisecond);

void BM_MonteCarloPaths(benchmark::State& state) {
    McConfig cfg;
    cfg.n_paths = 20000;
    cfg.threads = 1;
    cfg.scheme = state.range(0) == 0 ? PathScheme::lazy_bridge : PathScheme::sequential;
    if (cfg.scheme == PathScheme::sequential) cfg.n_paths = 1000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_first_passage(kUnderlying, kCounterparty, kMarket, 5.0, cfg).size());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.n_paths));
}
BENCHMARK(BM_MonteCarloPaths)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
