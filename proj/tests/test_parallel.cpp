#include <doctest.h>

#include "mvcg/harness.hpp"
#include "mvcg/serialize.hpp"
#include "support.hpp"

using namespace mvcg;

// The parallel paths must be drop-in replacements for the serial reference:
// same cells, same bytes.

TEST_CASE("parallel experiment grid matches the serial reference") {
    ExperimentConfig cfg;
    cfg.instance.states = 3;
    cfg.instance.actions = 2;
    cfg.instance.horizon = 3;
    cfg.instance.agents = 2;
    cfg.instance.seed = 20;
    cfg.T_grid = {24, 48};
    cfg.seeds = 3;
    cfg.mech.K = 6;
    cfg.keep_series = true;

    cfg.threads = 1;
    const auto serial = run_experiment(cfg);
    cfg.threads = 4;
    auto parallel = run_experiment(cfg);
    // The thread count is config echo, not a result; align it for comparison.
    parallel.config.threads = 1;
    CHECK(summary_json(serial) == summary_json(parallel));
    CHECK(series_csv(serial) == series_csv(parallel));
}

TEST_CASE("per-round agent parallelism does not change a run") {
    InstanceSpec spec;
    spec.states = 3;
    spec.actions = 2;
    spec.horizon = 3;
    spec.agents = 3;
    spec.seed = 21;
    const auto inst = build_instance(spec);
    const std::vector<ReportingStrategy> strategies(3, ReportingStrategy::truthful());

    MechanismConfig cfg;
    cfg.T = 30;
    cfg.K = 6;
    cfg.seed = 5;
    cfg.eval_threads = 1;
    const auto serial = run_mechanism(inst, strategies, cfg);
    cfg.eval_threads = 4;
    auto parallel = run_mechanism(inst, strategies, cfg);
    parallel.config.eval_threads = 1;
    CHECK(runlog_jsonl(serial, spec) == runlog_jsonl(parallel, spec));
}

TEST_CASE("thread count zero uses the full pool and still agrees") {
    ExperimentConfig cfg;
    cfg.instance.states = 2;
    cfg.instance.actions = 2;
    cfg.instance.horizon = 2;
    cfg.instance.agents = 1;
    cfg.instance.seed = 22;
    cfg.T_grid = {16};
    cfg.seeds = 4;
    cfg.mech.K = 4;

    cfg.threads = 1;
    const auto serial = run_experiment(cfg);
    cfg.threads = 0;
    auto pooled = run_experiment(cfg);
    pooled.config.threads = 1;
    CHECK(summary_json(serial) == summary_json(pooled));
}
