// Acceptance suite: exercises the full stack end to end and prints one
// pass/fail line per criterion. Intended to run under ctest but also works
// standalone; exit code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mvcg/harness.hpp"
#include "mvcg/serialize.hpp"
#include "support.hpp"

using namespace mvcg;

namespace {

struct Outcome {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

std::vector<Outcome> g_outcomes;

template <typename Fn> void criterion(const std::string& name, Fn&& fn) {
    Outcome out;
    out.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
        out.detail = fn(out.pass);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                      .count();
    std::printf("[%s] %s (%.1fs) %s\n", out.pass ? "PASS" : "FAIL", out.name.c_str(),
                out.seconds, out.detail.c_str());
    std::fflush(stdout);
    g_outcomes.push_back(std::move(out));
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), pattern, args...);
    return buf;
}

// Shared grid for criteria 4, 6 and 8: the welfare instance of the regret
// experiment, both price configurations, 20 paired seeds.
struct SharedGrid {
    ExperimentSummary opt_pes;
    ExperimentSummary pes_opt;
    std::vector<int> T_grid{4096, 16384, 65536};
};

ExperimentConfig grid_config(ValueMode zeta2, ValueMode zeta3) {
    ExperimentConfig cfg;
    cfg.instance.kind = "onehot";
    cfg.instance.states = 5;
    cfg.instance.actions = 3;
    cfg.instance.horizon = 5;
    cfg.instance.agents = 2;
    cfg.instance.seed = 5;
    cfg.T_grid = {4096, 16384, 65536};
    cfg.seeds = 20;
    cfg.base_seed = 7;
    cfg.mech.zeta1 = DataPolicy::Etc;
    cfg.mech.zeta2 = zeta2;
    cfg.mech.zeta3 = zeta3;
    cfg.mech.K = 0; // ceil(T^{2/3})
    cfg.mech.c_beta = 0.1;
    cfg.mech.beta_form = BetaForm::Practical;
    cfg.mech.delta = 0.1;
    cfg.threads = 0;
    return cfg;
}

SharedGrid run_shared_grid() {
    SharedGrid grid;
    grid.opt_pes = run_experiment(grid_config(ValueMode::Optimistic, ValueMode::Pessimistic));
    grid.pes_opt = run_experiment(grid_config(ValueMode::Pessimistic, ValueMode::Optimistic));
    return grid;
}

double utility_deficit(const TAggregate& agg) {
    double deficit = 0.0;
    for (double u : agg.mean_ui_over_T)
        deficit = std::max(deficit, -u);
    return deficit;
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("acceptance suite, %d worker threads\n", omp_get_max_threads());
#else
    std::printf("acceptance suite, single-threaded build\n");
#endif

    // 1. Closed-form values of the two hand-analyzable instance families.
    criterion("1 hard-instance closed forms", [](bool& pass) {
        const double tol = 1e-9;
        double worst = 0.0;
        struct Case {
            int n, H;
            double delta;
        };
        for (const Case c : {Case{3, 2, 0.1}, Case{3, 3, 0.1}, Case{5, 4, 0.05}}) {
            const auto t0 = make_hard_instance(c.n, c.H, c.n + 2, HardVariant::Theta0);
            const double v0 = exact_plan(t0, RewardSelector::total(c.n)).value[0][0];
            worst = std::max(worst, std::abs(v0 - 0.5 * c.n * (c.H - 1)));

            const auto t1 = make_hard_instance(c.n, c.H, c.n + 2, HardVariant::Theta1, c.delta);
            for (int i = 1; i <= c.n; ++i) {
                const double vi =
                    exact_plan(t1, RewardSelector::without_agent(c.n, i)).value[0][0];
                worst = std::max(worst,
                                 std::abs(vi - (0.5 + c.delta) * (c.n - 1) * (c.H - 1)));
            }
        }
        pass = worst <= tol;
        return fmt("max deviation %.2e (tol %.0e)", worst, tol);
    });

    // 2. The regret decomposition identities are exact algebra; residuals on
    //    arbitrary synthetic logs must be pure floating-point noise.
    criterion("2 regret identities on 1000 synthetic logs", [](bool& pass) {
        const double tol = 1e-9;
        double worst = 0.0;
        Rng maker(99);
        for (int trial = 0; trial < 1000; ++trial) {
            const auto inst = testsupport::random_small_instance(maker, 3, 3, 3, 3);
            const auto bench = vcg_benchmark(inst);
            const int T = 5 + maker.uniform_int(60);

            RunLog log;
            log.config.T = T;
            log.config.K = 1 + maker.uniform_int(T - 1);
            log.n = inst.n;
            log.H = inst.H;
            log.S = inst.S;
            log.A = inst.A;
            log.R_max = inst.R_max;
            for (int p = 0; p < 3; ++p) {
                PolicyTable table(inst.H, inst.S);
                for (int h = 0; h < inst.H; ++h)
                    for (int s = 0; s < inst.S; ++s)
                        table.set(h, s, maker.uniform_int(inst.A));
                log.policies.push_back(std::move(table));
            }
            for (int t = 1; t <= T; ++t) {
                RoundRecord round;
                round.t = t;
                round.phase = t <= log.config.K ? Phase::Explore : Phase::Exploit;
                round.policy_id = maker.uniform_int(3);
                round.prices.resize(inst.n);
                for (double& p : round.prices)
                    p = maker.uniform(-1.0, 2.0);
                round.F.assign(inst.n, 0.0);
                round.G.assign(inst.n, 0.0);
                log.rounds.push_back(std::move(round));
            }
            const auto rep = compute_regrets(log, bench, inst);
            worst = std::max(worst, rep.max_identity_residual());
        }
        pass = worst <= tol;
        return fmt("max identity residual %.2e (tol %.0e)", worst, tol);
    });

    // 3. Exact planning equals exhaustive policy enumeration.
    criterion("3 oracle equals brute-force enumeration on 200 instances", [](bool& pass) {
        const double tol = 1e-12;
        std::vector<double> gaps(200, 0.0);
        std::vector<std::uint64_t> seeds(200);
        Rng maker(123456);
        for (auto& s : seeds)
            s = maker.raw();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int trial = 0; trial < 200; ++trial) {
            Rng rng(seeds[trial]);
            const auto inst = testsupport::random_small_instance(rng, 3, 3, 3, 2);
            const auto sel = RewardSelector::total(inst.n);
            const double planned = exact_plan(inst, sel).value[0][inst.initial_state];
            const double best = testsupport::enumerate_best_policy(inst, sel);
            gaps[trial] = std::abs(planned - best);
        }
        const double worst = *std::max_element(gaps.begin(), gaps.end());
        pass = worst <= tol;
        return fmt("max |plan - enumeration| = %.2e (tol %.0e)", worst, tol);
    });

    // Criteria 4, 6 and 8 share one experiment grid.
    std::printf("running the shared regret grid (2 price configs x 3 T x 20 seeds)...\n");
    std::fflush(stdout);
    const SharedGrid grid = run_shared_grid();

    // 4. Sublinear welfare regret under the frozen-data strategy.
    criterion("4 welfare regret grows sublinearly (frozen data)", [&](bool& pass) {
        const auto& aggs = grid.opt_pes.aggregates;
        bool decreasing = true;
        for (std::size_t i = 1; i < aggs.size(); ++i)
            if (aggs[i].mean_reg_w_over_T >= aggs[i - 1].mean_reg_w_over_T)
                decreasing = false;
        double slope = std::nan("");
        if (grid.opt_pes.slope)
            slope = *grid.opt_pes.slope;
        pass = decreasing && slope >= 0.45 && slope <= 0.90;
        return fmt("slope %.3f (need [0.45, 0.90]); Reg_W/T %s: %.4f -> %.4f -> %.4f",
                   slope, decreasing ? "decreasing" : "NOT decreasing",
                   aggs[0].mean_reg_w_over_T, aggs[1].mean_reg_w_over_T,
                   aggs[2].mean_reg_w_over_T);
    });

    // 5. Theory-scale bonuses give optimistic/pessimistic coverage.
    criterion("5 optimism coverage at theory scale", [](bool& pass) {
        InstanceSpec spec;
        spec.states = 3;
        spec.actions = 3;
        spec.horizon = 3;
        spec.agents = 2;
        spec.seed = 515;
        const auto inst = build_instance(spec);
        const auto sel_R = RewardSelector::total(inst.n);
        const auto sel_m1 = RewardSelector::without_agent(inst.n, 1);
        const double v_star_R = exact_plan(inst, sel_R).value[0][inst.initial_state];
        const double v_star_m1 = exact_plan(inst, sel_m1).value[0][inst.initial_state];

        const int K = 500, seeds = 200;
        const double delta = 0.1;
        const double beta = bonus_beta(BetaForm::TheoryAgents, 1.0, inst.n, inst.R_max,
                                       inst.d, inst.H, K, delta);
        PlanParams params;
        params.beta = beta;
        params.B = inst.H * (inst.n + inst.R_max);
        params.lambda = 1.0;

        std::vector<int> up(seeds, 0), down(seeds, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int s = 0; s < seeds; ++s) {
            Rng rng(Rng::derive(515, s));
            const auto data =
                explore(inst, make_explore_params(inst, K, delta, 1.0, beta), rng)
                    .dataset(inst);
            const auto index = build_index(data, inst, 1.0, K);
            const double v_opt = plan(inst, index, sel_R, ValueMode::Optimistic, params).v1;
            const double v_pes = plan(inst, index, sel_m1, ValueMode::Pessimistic, params).v1;
            up[s] = v_opt >= v_star_R - 1e-12 ? 1 : 0;
            down[s] = v_pes <= v_star_m1 + 1e-12 ? 1 : 0;
        }
        double up_rate = 0.0, down_rate = 0.0;
        for (int s = 0; s < seeds; ++s) {
            up_rate += up[s];
            down_rate += down[s];
        }
        up_rate /= seeds;
        down_rate /= seeds;
        pass = up_rate >= 0.85 && down_rate >= 0.85;
        return fmt("optimistic coverage %.3f, pessimistic coverage %.3f (need >= 0.85)",
                   up_rate, down_rate);
    });

    // 6. Asymptotic individual rationality in both price configurations.
    criterion("6 asymptotic individual rationality", [&](bool& pass) {
        pass = true;
        double worst_u = 1e300;
        for (const auto* summary : {&grid.opt_pes, &grid.pes_opt}) {
            const auto& last = summary->aggregates.back();
            for (double u : last.mean_ui_over_T) {
                worst_u = std::min(worst_u, u);
                if (u < -0.05)
                    pass = false;
            }
            for (std::size_t i = 1; i < summary->aggregates.size(); ++i)
                if (utility_deficit(summary->aggregates[i]) >
                    utility_deficit(summary->aggregates[i - 1]) + 1e-12)
                    pass = false;
        }
        return fmt("min mean U_i/T at T=65536: %.4f (need >= -0.05); deficits nonincreasing",
                   worst_u);
    });

    // 7. Asymptotic truthfulness: the per-round gain from a complement
    //    misreport must not grow with T.
    criterion("7 asymptotic truthfulness", [](bool& pass) {
        const std::vector<int> Ts{4096, 65536};
        std::vector<double> gains;
        for (int T : Ts) {
            ExperimentConfig truthful = grid_config(ValueMode::Optimistic,
                                                    ValueMode::Pessimistic);
            truthful.T_grid = {T};
            truthful.seeds = 20;
            ExperimentConfig lying = truthful;
            ReportTransform complement;
            complement.kind = ReportTransform::Kind::Complement;
            lying.strategies = {ReportingStrategy::untruthful(complement),
                                ReportingStrategy::truthful()};
            const auto honest = run_experiment(truthful);
            const auto dishonest = run_experiment(lying);
            gains.push_back(dishonest.aggregates[0].mean_ui_over_T[0] -
                            honest.aggregates[0].mean_ui_over_T[0]);
        }
        pass = gains[1] <= std::max(0.05, gains[0]);
        return fmt("mean (U~ - U)/T: %.4f at T=4096, %.4f at T=65536", gains[0], gains[1]);
    });

    // 8. Price ordering across the two configurations on paired seeds.
    criterion("8 seller/agent trade-off direction", [&](bool& pass) {
        pass = true;
        std::string detail;
        for (std::size_t i = 0; i < grid.T_grid.size(); ++i) {
            const double hi = grid.opt_pes.aggregates[i].mean_price;
            const double lo = grid.pes_opt.aggregates[i].mean_price;
            if (hi < lo)
                pass = false;
            detail += fmt("T=%d: %.4f vs %.4f; ", grid.T_grid[i], hi, lo);
        }
        return "mean price (opt,pes) vs (pes,opt): " + detail;
    });

    // 9. Re-running a fixed-seed experiment reproduces the artifacts byte for
    //    byte.
    criterion("9 determinism of serialized artifacts", [](bool& pass) {
        ExperimentConfig cfg = grid_config(ValueMode::Optimistic, ValueMode::Pessimistic);
        cfg.T_grid = {4096};
        cfg.seeds = 3;
        cfg.keep_series = true;
        const auto a = run_experiment(cfg);
        const auto b = run_experiment(cfg);
        const bool json_same = summary_json(a) == summary_json(b);
        const bool csv_same = series_csv(a) == series_csv(b);
        pass = json_same && csv_same;
        return fmt("summary.json %s, series.csv %s", json_same ? "identical" : "DIFFERS",
                   csv_same ? "identical" : "DIFFERS");
    });

    int failures = 0;
    for (const auto& out : g_outcomes)
        if (!out.pass)
            ++failures;
    std::printf("%zu criteria, %d failed\n", g_outcomes.size(), failures);
    return failures;
}
