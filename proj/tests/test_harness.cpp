#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mvcg/harness.hpp"
#include "mvcg/serialize.hpp"
#include "support.hpp"

using namespace mvcg;

namespace {

/// Builds a synthetic log that plays the given policies with the given
/// prices; everything else is filled with placeholders.
RunLog synthetic_log(const LinearMdpInstance& inst, std::vector<PolicyTable> policies,
                     const std::vector<int>& policy_per_round,
                     const std::vector<std::vector<double>>& prices, int K = 1) {
    RunLog log;
    log.config.T = static_cast<int>(policy_per_round.size());
    log.config.K = K;
    log.n = inst.n;
    log.H = inst.H;
    log.S = inst.S;
    log.A = inst.A;
    log.R_max = inst.R_max;
    log.policies = std::move(policies);
    for (std::size_t t = 0; t < policy_per_round.size(); ++t) {
        RoundRecord round;
        round.t = static_cast<int>(t) + 1;
        round.phase = round.t <= K ? Phase::Explore : Phase::Exploit;
        round.policy_id = policy_per_round[t];
        round.prices = prices[t];
        round.F.assign(inst.n, 0.0);
        round.G.assign(inst.n, 0.0);
        log.rounds.push_back(std::move(round));
    }
    return log;
}

PolicyTable random_policy(const LinearMdpInstance& inst, Rng& rng) {
    PolicyTable p(inst.H, inst.S);
    for (int h = 0; h < inst.H; ++h)
        for (int s = 0; s < inst.S; ++s)
            p.set(h, s, rng.uniform_int(inst.A));
    return p;
}

} // namespace

TEST_CASE("an optimal log with benchmark prices has zero regret") {
    Rng rng(1);
    const auto inst = testsupport::random_small_instance(rng);
    const auto bench = vcg_benchmark(inst);
    const int T = 12;
    std::vector<double> star_prices;
    for (const auto& agent : bench.agents)
        star_prices.push_back(agent.price);
    const auto log = synthetic_log(inst, {bench.pi_star}, std::vector<int>(T, 0),
                                   std::vector<std::vector<double>>(T, star_prices), 0);
    const auto rep = compute_regrets(log, bench, inst);
    CHECK(std::abs(rep.Reg_W) <= 1e-9);
    CHECK(std::abs(rep.Reg_0) <= 1e-9);
    CHECK(std::abs(rep.Reg_sharp) <= 1e-9);
    CHECK(std::abs(rep.Z) <= 1e-9);
    for (int t = 0; t < T; ++t)
        CHECK(std::abs(rep.reg_w[t]) <= 1e-12);
}

TEST_CASE("regret decomposition identities hold for arbitrary logs") {
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = testsupport::random_small_instance(rng);
        const auto bench = vcg_benchmark(inst);
        const int T = 3 + rng.uniform_int(30);
        std::vector<PolicyTable> policies;
        for (int p = 0; p < 4; ++p)
            policies.push_back(random_policy(inst, rng));
        std::vector<int> ids(T);
        std::vector<std::vector<double>> prices(T, std::vector<double>(inst.n));
        for (int t = 0; t < T; ++t) {
            ids[t] = rng.uniform_int(4);
            for (int i = 0; i < inst.n; ++i)
                prices[t][i] = rng.uniform(-1.0, 2.0);
        }
        const auto log = synthetic_log(inst, std::move(policies), ids, prices);
        const auto rep = compute_regrets(log, bench, inst);
        CHECK(rep.max_identity_residual() <= 1e-9);
        CHECK(rep.Reg_W >= -1e-9);

        // Welfare accounting per round: utilities sum to the played welfare.
        for (int t = 0; t < T; ++t) {
            double total = rep.u0[t];
            for (int i = 0; i < inst.n; ++i)
                total += rep.ui[t][i];
            CHECK(std::abs(total - rep.v_pi_R[t]) <= 1e-9);
        }
    }
}

TEST_CASE("exploration-only log: agent regret loses only the price term") {
    Rng rng(3);
    const auto inst = testsupport::random_small_instance(rng);
    const auto bench = vcg_benchmark(inst);
    const int T = 6;
    std::vector<PolicyTable> policies{random_policy(inst, rng)};
    const auto log =
        synthetic_log(inst, std::move(policies), std::vector<int>(T, 0),
                      std::vector<std::vector<double>>(T, std::vector<double>(inst.n, 0.0)),
                      T);
    const auto rep = compute_regrets(log, bench, inst);
    const auto streams = exact_eval_streams(inst, log.policies[0]);
    for (int t = 0; t < T; ++t)
        for (int i = 1; i <= inst.n; ++i)
            CHECK(rep.regi[t][i - 1] ==
                  doctest::Approx(bench.agents[i - 1].utility - streams[i]).epsilon(1e-12));
}

TEST_CASE("mismatched benchmark is rejected") {
    Rng rng(4);
    const auto inst = testsupport::random_small_instance(rng);
    auto other = inst;
    for (auto& m : other.means)
        m = std::min(1.0, m + 0.13);
    const auto bench_other = vcg_benchmark(other);
    const auto log = synthetic_log(inst, {PolicyTable(inst.H, inst.S)}, {0, 0},
                                   {std::vector<double>(inst.n, 0.0),
                                    std::vector<double>(inst.n, 0.0)});
    CHECK_THROWS_AS(compute_regrets(log, bench_other, inst), std::invalid_argument);
}

TEST_CASE("slope fitting on exact and noisy power laws") {
    std::vector<std::pair<double, double>> pts;
    for (double T : {1e3, 1e4, 1e5})
        pts.emplace_back(T, 7.0 * std::pow(T, 2.0 / 3.0));
    CHECK(fit_exponent(pts) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

    pts.clear();
    for (double T : {1e3, 1e4, 1e5})
        pts.emplace_back(T, 3.0 * T);
    CHECK(fit_exponent(pts) == doctest::Approx(1.0).epsilon(1e-9));

    // 1% multiplicative noise moves a sqrt slope only slightly.
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        pts.clear();
        for (double T : {1e3, 1e4, 1e5, 1e6})
            pts.emplace_back(T, std::sqrt(T) * (1.0 + 0.01 * rng.uniform(-1.0, 1.0)));
        const double slope = fit_exponent(pts);
        CHECK(slope >= 0.45);
        CHECK(slope <= 0.55);
    }

    std::vector<std::string> warnings;
    pts = {{1e3, -1.0}, {1e4, 10.0}, {1e5, 20.0}};
    CHECK_THROWS_AS(fit_exponent(pts, &warnings), std::invalid_argument);
    CHECK(warnings.size() == 1);
}

TEST_CASE("single-cell experiment carries exactly that report") {
    ExperimentConfig cfg;
    cfg.instance.states = 2;
    cfg.instance.actions = 2;
    cfg.instance.horizon = 2;
    cfg.instance.agents = 1;
    cfg.instance.seed = 3;
    cfg.T_grid = {20};
    cfg.seeds = 1;
    cfg.mech.K = 5;
    const auto summary = run_experiment(cfg);
    REQUIRE(summary.cells.size() == 1);
    CHECK(summary.cells[0].ok);
    CHECK(summary.cells[0].T == 20);
    REQUIRE(summary.aggregates.size() == 1);
    CHECK(summary.aggregates[0].surviving == 1);
    CHECK(summary.aggregates[0].mean_reg_w ==
          doctest::Approx(summary.cells[0].Reg_W));
}

TEST_CASE("experiments are deterministic across invocations") {
    ExperimentConfig cfg;
    cfg.instance.states = 3;
    cfg.instance.actions = 2;
    cfg.instance.horizon = 3;
    cfg.instance.agents = 2;
    cfg.instance.seed = 6;
    cfg.T_grid = {16, 32};
    cfg.seeds = 2;
    cfg.mech.K = 4;
    cfg.keep_series = true;
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(cfg);
    CHECK(summary_json(a) == summary_json(b));
    CHECK(series_csv(a) == series_csv(b));
    // Row count: one per (cell, round) plus the header line.
    const std::string csv = series_csv(a);
    const auto rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == 1 + 2 * (16 + 32));
}

TEST_CASE("aggregates equal a direct mean over cells") {
    ExperimentConfig cfg;
    cfg.instance.states = 2;
    cfg.instance.actions = 2;
    cfg.instance.horizon = 2;
    cfg.instance.agents = 1;
    cfg.instance.seed = 9;
    cfg.T_grid = {24};
    cfg.seeds = 4;
    cfg.mech.K = 6;
    const auto summary = run_experiment(cfg);
    double mean = 0.0;
    for (const auto& cell : summary.cells)
        mean += cell.Reg_W;
    mean /= summary.cells.size();
    CHECK(summary.aggregates[0].mean_reg_w == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("failed cells are recorded without sinking the summary") {
    ExperimentConfig cfg;
    cfg.instance.states = 2;
    cfg.instance.actions = 2;
    cfg.instance.horizon = 2;
    cfg.instance.agents = 1;
    cfg.instance.seed = 10;
    cfg.T_grid = {2}; // K defaults to ceil(2^(2/3)) = 2, so K < T fails
    cfg.seeds = 2;
    const auto summary = run_experiment(cfg);
    CHECK(summary.aggregates[0].surviving == 0);
    for (const auto& cell : summary.cells) {
        CHECK(!cell.ok);
        CHECK(!cell.error.empty());
    }
    CHECK(summary.warnings.size() >= 2);
}

TEST_CASE("report csv has one line per round plus a header") {
    Rng rng(11);
    const auto inst = testsupport::random_small_instance(rng);
    const auto bench = vcg_benchmark(inst);
    const int T = 9;
    const auto log =
        synthetic_log(inst, {random_policy(inst, rng)}, std::vector<int>(T, 0),
                      std::vector<std::vector<double>>(T, std::vector<double>(inst.n, 0.1)));
    const auto rep = compute_regrets(log, bench, inst);
    const std::string csv = report_csv(rep);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == T + 1);
}
