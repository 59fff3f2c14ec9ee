#include "mvcg/exploit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mvcg {

RewardSelector::RewardSelector(std::vector<double> mask) : mask_(std::move(mask)) {
    if (std::accumulate(mask_.begin(), mask_.end(), 0.0) <= 0.0)
        throw std::invalid_argument("reward selector must keep at least one stream");
}

RewardSelector RewardSelector::total(int n) {
    return RewardSelector(std::vector<double>(n + 1, 1.0));
}

RewardSelector RewardSelector::without_agent(int n, int i) {
    if (i < 1 || i > n)
        throw std::invalid_argument("excluded agent index out of range");
    std::vector<double> mask(n + 1, 1.0);
    mask[i] = 0.0;
    return RewardSelector(std::move(mask));
}

RewardSelector RewardSelector::custom(int n, std::vector<int> streams) {
    std::vector<double> mask(n + 1, 0.0);
    for (int s : streams) {
        if (s < 0 || s > n)
            throw std::invalid_argument("selector stream index out of range");
        mask[s] = 1.0;
    }
    return RewardSelector(std::move(mask));
}

double RewardSelector::pick(const std::vector<double>& rewards) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < mask_.size(); ++i)
        acc += mask_[i] * rewards[i];
    return acc;
}

double RewardSelector::mean_pick(const LinearMdpInstance& inst, int h, int s, int a) const {
    double acc = 0.0;
    for (int i = 0; i <= inst.n; ++i)
        if (mask_[i] != 0.0)
            acc += inst.reward_mean(i, h, s, a);
    return acc;
}

double RewardSelector::step_bound(double r_max) const {
    double acc = mask_[0] * r_max;
    for (std::size_t i = 1; i < mask_.size(); ++i)
        acc += mask_[i];
    return acc;
}

double truncation_alpha(const RewardSelector& sel, double r_max, int h, int H) {
    if (h < 0 || h >= H)
        throw std::invalid_argument("step index out of range");
    return sel.step_bound(r_max) * (H - h);
}

std::vector<int> index_set(DataPolicy zeta1, int K, int t) {
    if (t <= K)
        throw std::invalid_argument("index set is only defined for exploitation rounds");
    const int last = zeta1 == DataPolicy::Etc ? K : t - 1;
    std::vector<int> out(last);
    std::iota(out.begin(), out.end(), 1);
    return out;
}

namespace {

struct PassOutput {
    double v1;
    PolicyTable policy;
    std::vector<Eigen::VectorXd> weights;
    std::vector<std::vector<double>> q;
};

/// Shared backward pass. When `policy` is null the value update is greedy
/// (planning); otherwise it follows the given policy (evaluation).
PassOutput backward_pass(const LinearMdpInstance& inst, const DatasetIndex& index,
                         const RewardSelector& sel, ValueMode mode,
                         const PolicyTable* policy, const PlanParams& params) {
    if (&index.instance() != &inst)
        throw std::invalid_argument("index was built for a different instance");
    if (!(params.lambda > 0.0) || params.beta < 0.0 || !(params.B > 0.0))
        throw std::invalid_argument("invalid plan parameters");
    if (sel.n() != inst.n)
        throw std::invalid_argument("selector built for a different agent count");
    if (policy && (policy->H != inst.H || policy->S != inst.S))
        throw std::invalid_argument("policy table does not match the instance");

    const int S = inst.S, A = inst.A, H = inst.H;
    const double B = params.B;

    PassOutput out;
    out.policy = PolicyTable(H, S);
    out.weights.resize(H);
    out.q.assign(H, std::vector<double>(static_cast<std::size_t>(S) * A, 0.0));

    std::vector<double> v_next(S, 0.0), v_cur(S, 0.0);
    for (int h = H - 1; h >= 0; --h) {
        const GramState& gram = index.gram(h);
        Eigen::VectorXd b = index.reward_moment(h, sel.weights());
        b += index.transition_moment(h, v_next);
        Eigen::VectorXd w = gram.ridge_solve(b);

        const double alpha = truncation_alpha(sel, inst.R_max, h, H);
        for (int s = 0; s < S; ++s) {
            double best = -1.0;
            int best_a = 0;
            for (int a = 0; a < A; ++a) {
                const Eigen::VectorXd& phi = inst.phi[static_cast<std::size_t>(s) * A + a];
                const double u = gram.bonus(phi, params.beta, B);
                const double f = std::clamp(w.dot(phi), 0.0, B);
                const double value = mode == ValueMode::Optimistic
                                         ? std::min(f + u, alpha)
                                         : std::clamp(f - u, 0.0, alpha);
                out.q[h][static_cast<std::size_t>(s) * A + a] = value;
                if (value > best) {
                    best = value;
                    best_a = a;
                }
            }
            out.policy.set(h, s, best_a);
            v_cur[s] = policy ? out.q[h][static_cast<std::size_t>(s) * A + policy->at(h, s)]
                              : best;
        }
        out.weights[h] = std::move(w);
        std::swap(v_next, v_cur);
    }
    out.v1 = v_next[inst.initial_state];
    return out;
}

} // namespace

PlanResult plan(const LinearMdpInstance& inst, const DatasetIndex& index,
                const RewardSelector& sel, ValueMode mode, const PlanParams& params) {
    PassOutput pass = backward_pass(inst, index, sel, mode, nullptr, params);
    PlanResult result;
    result.v1 = pass.v1;
    result.policy = std::move(pass.policy);
    result.weights = std::move(pass.weights);
    result.q = std::move(pass.q);
    result.mode = mode;
    return result;
}

EvalResult evaluate_policy(const LinearMdpInstance& inst, const DatasetIndex& index,
                           const RewardSelector& sel, ValueMode mode,
                           const PolicyTable& policy, const PlanParams& params) {
    PassOutput pass = backward_pass(inst, index, sel, mode, &policy, params);
    EvalResult result;
    result.v1 = pass.v1;
    result.q = std::move(pass.q);
    return result;
}

PlanResult plan(const LinearMdpInstance& inst, const Dataset& data,
                const RewardSelector& sel, DataPolicy zeta1, ValueMode zeta2, int t,
                const PlanParams& params) {
    const auto episodes = index_set(zeta1, data.K, t);
    if (episodes.size() > data.episodes.size())
        throw std::invalid_argument("dataset has fewer episodes than the index set needs");
    DatasetIndex index =
        build_index(data, inst, params.lambda, static_cast<int>(episodes.size()));
    PlanResult result = plan(inst, index, sel, zeta2, params);
    result.data_policy = zeta1;
    return result;
}

EvalResult evaluate_policy(const LinearMdpInstance& inst, const Dataset& data,
                           const RewardSelector& sel, DataPolicy zeta1, ValueMode zeta3,
                           int t, const PolicyTable& policy, const PlanParams& params) {
    const auto episodes = index_set(zeta1, data.K, t);
    if (episodes.size() > data.episodes.size())
        throw std::invalid_argument("dataset has fewer episodes than the index set needs");
    DatasetIndex index =
        build_index(data, inst, params.lambda, static_cast<int>(episodes.size()));
    return evaluate_policy(inst, index, sel, zeta3, policy, params);
}

} // namespace mvcg
