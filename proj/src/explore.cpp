#include "mvcg/explore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvcg {

double bonus_beta(BetaForm form, double c_beta, int n, double r_max, int d, int H,
                  int K, double delta) {
    if (c_beta < 0.0)
        throw std::invalid_argument("beta scale must be nonnegative");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in (0, 1)");
    const double k = std::max(K, 1);
    const double base = static_cast<double>(n) * d * H * k / delta;
    switch (form) {
    case BetaForm::TheoryAgents:
        return c_beta * n * d * H * std::sqrt(std::log(base));
    case BetaForm::TheoryTotal:
        return c_beta * (n + r_max) * d * H * std::sqrt(std::log(2.0 * base));
    case BetaForm::Practical:
        return c_beta * std::sqrt(d * std::log(base));
    }
    throw std::invalid_argument("unknown beta form");
}

void ExploreParams::validate(const LinearMdpInstance& inst) const {
    if (K < 0)
        throw std::invalid_argument("K must be nonnegative");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(lambda > 0.0))
        throw std::invalid_argument("lambda must be positive");
    if (beta < 0.0)
        throw std::invalid_argument("beta must be nonnegative");
    const double expected = inst.H * (inst.n + inst.R_max);
    if (B != expected)
        throw std::invalid_argument("B must equal H * (n + R_max)");
}

ExploreParams make_explore_params(const LinearMdpInstance& inst, int K, double delta,
                                  double lambda, double beta) {
    ExploreParams p;
    p.K = K;
    p.delta = delta;
    p.lambda = lambda;
    p.beta = beta;
    p.B = inst.H * (inst.n + inst.R_max);
    p.validate(inst);
    return p;
}

Dataset ExploreResult::dataset(const LinearMdpInstance& inst) const {
    Dataset d = make_dataset(inst, K);
    d.episodes.reserve(episodes.size());
    for (const auto& ep : episodes)
        d.episodes.push_back(ep.reported);
    d.validate();
    return d;
}

ExploreResult explore(const LinearMdpInstance& inst, const ExploreParams& params,
                      Rng& rng, const RewardReporter& reporter) {
    params.validate(inst);
    inst.validate();

    ExploreResult result;
    result.K = params.K;
    result.episodes.reserve(params.K);

    // Count-only index: the LSVI below touches gram() and transition_moment()
    // exclusively, so the exploration targets stay reward-free by construction.
    DatasetIndex index(inst, params.lambda);

    const int S = inst.S, A = inst.A, H = inst.H;
    const double B = params.B;

    std::vector<double> v_next(S), v_cur(S);
    std::vector<double> q(static_cast<std::size_t>(S) * A);

    for (int k = 1; k <= params.K; ++k) {
        ExploreEpisode ep;
        ep.policy = PolicyTable(H, S);

        std::fill(v_next.begin(), v_next.end(), 0.0);
        for (int h = H - 1; h >= 0; --h) {
            const GramState& gram = index.gram(h);
            const Eigen::VectorXd w = gram.ridge_solve(index.transition_moment(h, v_next));
            for (int s = 0; s < S; ++s) {
                double best = -1.0;
                int best_a = 0;
                for (int a = 0; a < A; ++a) {
                    const Eigen::VectorXd& phi = inst.phi[static_cast<std::size_t>(s) * A + a];
                    const double u = gram.bonus(phi, params.beta, B);
                    const double f = std::clamp(w.dot(phi), 0.0, B);
                    const double value = std::min(f + u / H + u, B);
                    q[static_cast<std::size_t>(s) * A + a] = value;
                    if (value > best) {
                        best = value;
                        best_a = a;
                    }
                }
                v_cur[s] = best;
                ep.policy.set(h, s, best_a);
            }
            std::swap(v_next, v_cur);
        }
        ep.v1 = v_next[inst.initial_state];

        // Roll the greedy policy out and log every stream's realized reward.
        ep.reported.episode = k;
        ep.reported.steps.resize(H);
        ep.reported.rewards.resize(H);
        ep.true_rewards.resize(H);
        int s = inst.initial_state;
        for (int h = 0; h < H; ++h) {
            const int a = ep.policy.at(h, s);
            SampleResult draw = sample_step(inst, h, s, a, rng);
            ep.reported.steps[h] = {h, s, a, draw.next_state};
            ep.true_rewards[h] = draw.rewards;
            ep.reported.rewards[h] = draw.rewards;
            if (reporter)
                for (int i = 1; i <= inst.n; ++i)
                    ep.reported.rewards[h][i] =
                        reporter(i, k, h, s, a, draw.rewards[i]);
            s = draw.next_state;
        }

        index.append(ep.reported);
        result.episodes.push_back(std::move(ep));
    }
    return result;
}

} // namespace mvcg
