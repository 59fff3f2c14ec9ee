// Throughput comparison between the serial reference paths and the
// OpenMP-parallel ones, plus microbenchmarks of the regression kernels.
//
// Run: ./build/bench/bench_parallel [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "mvcg/explore.hpp"
#include "mvcg/gram.hpp"
#include "mvcg/harness.hpp"

namespace {

using namespace mvcg;

ExperimentConfig small_grid(int threads) {
    ExperimentConfig cfg;
    cfg.instance.states = 5;
    cfg.instance.actions = 3;
    cfg.instance.horizon = 5;
    cfg.instance.agents = 2;
    cfg.instance.seed = 5;
    cfg.T_grid = {512, 1024};
    cfg.seeds = 8;
    cfg.base_seed = 7;
    cfg.mech.c_beta = 0.1;
    cfg.mech.beta_form = BetaForm::Practical;
    cfg.threads = threads;
    return cfg;
}

void BM_experiment_serial(benchmark::State& state) {
    const auto cfg = small_grid(1);
    for (auto _ : state) {
        auto summary = run_experiment(cfg);
        benchmark::DoNotOptimize(summary.aggregates.front().mean_reg_w);
    }
}
BENCHMARK(BM_experiment_serial)->Unit(benchmark::kMillisecond);

void BM_experiment_parallel(benchmark::State& state) {
    const auto cfg = small_grid(0);
    for (auto _ : state) {
        auto summary = run_experiment(cfg);
        benchmark::DoNotOptimize(summary.aggregates.front().mean_reg_w);
    }
}
BENCHMARK(BM_experiment_parallel)->Unit(benchmark::kMillisecond);

void BM_mechanism_agent_loop(benchmark::State& state) {
    InstanceSpec spec;
    spec.states = 4;
    spec.actions = 3;
    spec.horizon = 4;
    spec.agents = 6;
    spec.seed = 11;
    const auto inst = build_instance(spec);
    const std::vector<ReportingStrategy> strategies(6, ReportingStrategy::truthful());
    MechanismConfig cfg;
    cfg.T = 256;
    cfg.K = 40;
    cfg.zeta1 = DataPolicy::Ewc; // replans every round, so the agent loop matters
    cfg.eval_threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto log = run_mechanism(inst, strategies, cfg);
        benchmark::DoNotOptimize(log.rounds.back().prices[0]);
    }
}
BENCHMARK(BM_mechanism_agent_loop)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_gram_add(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    Rng rng(1);
    Eigen::VectorXd phi(d);
    for (int i = 0; i < d; ++i)
        phi[i] = rng.uniform(-1.0, 1.0);
    phi.normalize();
    GramState g(d, 1.0);
    for (auto _ : state) {
        g.add(phi);
        benchmark::DoNotOptimize(g.count());
    }
}
BENCHMARK(BM_gram_add)->Arg(8)->Arg(16)->Arg(32);

void BM_quad_form(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    Rng rng(2);
    GramState g(d, 1.0);
    Eigen::VectorXd phi(d);
    for (int k = 0; k < 4 * d; ++k) {
        for (int i = 0; i < d; ++i)
            phi[i] = rng.uniform(-1.0, 1.0);
        phi.normalize();
        g.add(phi);
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(g.quad_form(phi));
}
BENCHMARK(BM_quad_form)->Arg(8)->Arg(16)->Arg(32);

} // namespace

BENCHMARK_MAIN();
