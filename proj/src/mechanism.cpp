#include "mvcg/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mvcg {

double ReportTransform::apply(int h, int s, int a, int S, int A, double realized) const {
    double value = realized;
    switch (kind) {
    case Kind::Identity:
        break;
    case Kind::Zero:
        value = 0.0;
        break;
    case Kind::One:
        value = 1.0;
        break;
    case Kind::Complement:
        value = 1.0 - realized;
        break;
    case Kind::Scale:
        value = scale * realized;
        break;
    case Kind::Bid:
        value = bid[(static_cast<std::size_t>(h) * S + s) * A + a];
        break;
    }
    return std::clamp(value, 0.0, 1.0);
}

ReportingStrategy ReportingStrategy::untruthful(ReportTransform t) {
    ReportingStrategy s;
    s.kind = Kind::Untruthful;
    s.transform = std::move(t);
    return s;
}

ReportingStrategy ReportingStrategy::switching(ReportTransform t, int r) {
    ReportingStrategy s;
    s.kind = Kind::Switch;
    s.transform = std::move(t);
    s.switch_round = r;
    return s;
}

double reported_reward(const ReportingStrategy& strategy, int t, int h, int s, int a,
                       int S, int A, double realized) {
    switch (strategy.kind) {
    case ReportingStrategy::Kind::Truthful:
        return std::clamp(realized, 0.0, 1.0);
    case ReportingStrategy::Kind::Untruthful:
        return strategy.transform.apply(h, s, a, S, A, realized);
    case ReportingStrategy::Kind::Switch:
        return t < strategy.switch_round
                   ? strategy.transform.apply(h, s, a, S, A, realized)
                   : std::clamp(realized, 0.0, 1.0);
    }
    throw std::invalid_argument("unknown reporting strategy kind");
}

int MechanismConfig::effective_K() const {
    if (K > 0)
        return K;
    const double raw = std::pow(static_cast<double>(T), 2.0 / 3.0);
    // Guard against pow landing a hair above an exact integer.
    const double rounded = std::nearbyint(raw);
    if (std::abs(raw - rounded) < 1e-9)
        return static_cast<int>(rounded);
    return static_cast<int>(std::ceil(raw));
}

void MechanismConfig::validate() const {
    if (T < 1)
        throw std::invalid_argument("T must be >= 1");
    const int k = effective_K();
    if (k < 1)
        throw std::invalid_argument("K must be >= 1");
    if (k > T || (k == T && !allow_degenerate))
        throw std::invalid_argument("need K < T");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(lambda > 0.0))
        throw std::invalid_argument("lambda must be positive");
    if (c_beta < 0.0)
        throw std::invalid_argument("beta scale must be nonnegative");
}

namespace {

struct RoundPlan {
    PolicyTable policy;
    int policy_id = 0;
    std::vector<double> F, G, prices;
};

RoundPlan compute_round_plan(const LinearMdpInstance& inst, const DatasetIndex& index,
                             const MechanismConfig& cfg, const PlanParams& params) {
    RoundPlan rp;
    rp.policy = plan(inst, index, RewardSelector::total(inst.n),
                     ValueMode::Optimistic, params)
                    .policy;
    rp.F.assign(inst.n, 0.0);
    rp.G.assign(inst.n, 0.0);
    rp.prices.assign(inst.n, 0.0);

    const bool parallel = cfg.eval_threads > 1 && inst.n > 1;
    std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(cfg.eval_threads) if (parallel)
#endif
    for (int i = 1; i <= inst.n; ++i) {
        try {
            const RewardSelector sel = RewardSelector::without_agent(inst.n, i);
            rp.F[i - 1] = plan(inst, index, sel, cfg.zeta2, params).v1;
            rp.G[i - 1] =
                evaluate_policy(inst, index, sel, cfg.zeta3, rp.policy, params).v1;
            rp.prices[i - 1] = rp.F[i - 1] - rp.G[i - 1];
        } catch (...) {
            failure = std::current_exception();
        }
    }
    (void)parallel;
    if (failure)
        std::rethrow_exception(failure);
    return rp;
}

} // namespace

RunLog run_mechanism(const LinearMdpInstance& inst,
                     const std::vector<ReportingStrategy>& strategies,
                     const MechanismConfig& config) {
    config.validate();
    inst.validate();
    if (static_cast<int>(strategies.size()) != inst.n)
        throw std::invalid_argument("need one reporting strategy per agent");

    const int K = config.effective_K();
    const double beta = bonus_beta(config.beta_form, config.c_beta, inst.n, inst.R_max,
                                   inst.d, inst.H, K, config.delta);

    RunLog log;
    log.config = config;
    log.config.K = K;
    log.n = inst.n;
    log.H = inst.H;
    log.S = inst.S;
    log.A = inst.A;
    log.R_max = inst.R_max;
    log.beta = beta;
    log.rounds.reserve(config.T);

    Rng rng(config.seed);

    const auto reporter = [&](int agent, int t, int h, int s, int a, double realized) {
        return reported_reward(strategies[agent - 1], t, h, s, a, inst.S, inst.A,
                               realized);
    };

    // Phase 1: reward-free exploration, no charging.
    const ExploreParams ep = make_explore_params(inst, K, config.delta, config.lambda, beta);
    ExploreResult explored = explore(inst, ep, rng, reporter);

    DatasetIndex index(inst, config.lambda);
    for (auto& episode : explored.episodes) {
        index.append(episode.reported);
        RoundRecord rec;
        rec.t = episode.reported.episode;
        rec.phase = Phase::Explore;
        rec.policy_id = static_cast<int>(log.policies.size());
        log.policies.push_back(std::move(episode.policy));
        rec.traj = std::move(episode.reported);
        rec.true_rewards = std::move(episode.true_rewards);
        rec.prices.assign(inst.n, 0.0);
        rec.F.assign(inst.n, 0.0);
        rec.G.assign(inst.n, 0.0);
        log.rounds.push_back(std::move(rec));
    }

    PlanParams params;
    params.beta = beta;
    params.B = inst.H * (inst.n + inst.R_max);
    params.lambda = config.lambda;

    // Phase 2: plan, price, execute, charge.
    bool have_cached = false;
    RoundPlan cached;
    for (int t = K + 1; t <= config.T; ++t) {
        const bool reuse =
            config.zeta1 == DataPolicy::Etc && have_cached && !config.disable_cache;
        RoundPlan rp;
        if (reuse) {
            rp = cached;
        } else {
            rp = compute_round_plan(inst, index, config, params);
            if (config.zeta1 == DataPolicy::Etc && have_cached &&
                rp.policy == log.policies[cached.policy_id]) {
                rp.policy_id = cached.policy_id;
            } else {
                rp.policy_id = static_cast<int>(log.policies.size());
                log.policies.push_back(rp.policy);
            }
            if (config.zeta1 == DataPolicy::Etc) {
                cached = rp;
                have_cached = true;
            }
        }

        RoundRecord rec;
        rec.t = t;
        rec.phase = Phase::Exploit;
        rec.policy_id = rp.policy_id;
        rec.F = rp.F;
        rec.G = rp.G;
        rec.prices = rp.prices;

        rec.traj.episode = t;
        rec.traj.steps.resize(inst.H);
        rec.traj.rewards.resize(inst.H);
        rec.true_rewards.resize(inst.H);
        int s = inst.initial_state;
        for (int h = 0; h < inst.H; ++h) {
            const int a = rp.policy.at(h, s);
            SampleResult draw = sample_step(inst, h, s, a, rng);
            rec.traj.steps[h] = {h, s, a, draw.next_state};
            rec.true_rewards[h] = draw.rewards;
            rec.traj.rewards[h] = draw.rewards;
            for (int i = 1; i <= inst.n; ++i)
                rec.traj.rewards[h][i] = reporter(i, t, h, s, a, draw.rewards[i]);
            s = draw.next_state;
        }

        if (config.zeta1 == DataPolicy::Ewc)
            index.append(rec.traj);

        log.rounds.push_back(std::move(rec));
    }
    return log;
}

} // namespace mvcg
