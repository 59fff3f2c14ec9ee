#pragma once

#include <vector>

#include "mvcg/env.hpp"
#include "mvcg/exploit.hpp"
#include "mvcg/policy.hpp"

namespace mvcg {

/// Exact finite-horizon dynamic programming on the true tables. Everything
/// here sees the instance's transition kernel and reward means directly; the
/// learner never does.
struct DpResult {
    std::vector<std::vector<double>> value; // [h][s], h = 0..H (value[H] is zero)
    PolicyTable policy;                     // greedy, lowest action index on ties
};

DpResult exact_plan(const LinearMdpInstance& inst, const RewardSelector& sel);

std::vector<std::vector<double>> exact_eval(const LinearMdpInstance& inst,
                                            const RewardSelector& sel,
                                            const PolicyTable& policy);

/// Per-stream values V_1^pi(x1; r_i) for i = 0..n in a single backward pass.
std::vector<double> exact_eval_streams(const LinearMdpInstance& inst,
                                       const PolicyTable& policy);

struct AgentBenchmark {
    PolicyTable pi_minus;   // optimal policy without this agent's reward
    double v_minus_opt = 0; // V_1^{pi-i}(x1; R^-i)
    double v_star_minus = 0; // V_1^{pi*}(x1; R^-i)
    double price = 0;        // v_minus_opt - v_star_minus
    double utility = 0;      // V_1^{pi*}(x1; R) - v_minus_opt
};

/// Ground-truth Markov VCG quantities: welfare-optimal policy, the fictitious
/// no-i policies, Clarke-pivot prices, and the implied utilities.
struct VcgBenchmark {
    int n = 0;
    double v_star = 0; // V_1^{pi*}(x1; R)
    PolicyTable pi_star;
    std::vector<AgentBenchmark> agents; // index 0 is agent 1
    double seller_utility = 0;          // sum_i v_minus_opt - (n-1) v_star

    /// Throws std::logic_error if the price/utility identities or the
    /// nonnegativity guarantees fail beyond 1e-9.
    void check() const;
};

VcgBenchmark vcg_benchmark(const LinearMdpInstance& inst);

} // namespace mvcg
