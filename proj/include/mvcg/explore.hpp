#pragma once

#include <functional>
#include <vector>

#include "mvcg/dataset.hpp"
#include "mvcg/env.hpp"
#include "mvcg/policy.hpp"
#include "mvcg/rng.hpp"

namespace mvcg {

/// Bonus scale profiles. The two theory forms follow the analysis constants
/// (agent-count and agent-plus-seller variants); the practical form keeps the
/// sqrt(d log) dependence but drops the n*H blowup, which at desk scale would
/// otherwise saturate every truncation bound.
enum class BetaForm {
    TheoryAgents, // c * n * d * H * sqrt(log(n d H K / delta))
    TheoryTotal,  // c * (n + R_max) * d * H * sqrt(log(2 n d H K / delta))
    Practical,    // c * sqrt(d * log(n d H K / delta))
};

double bonus_beta(BetaForm form, double c_beta, int n, double r_max, int d, int H,
                  int K, double delta);

struct ExploreParams {
    int K = 0;
    double delta = 0.1;
    double lambda = 1.0;
    double beta = 1.0;
    double B = 0.0; // truncation bound, must equal H * (n + R_max)

    void validate(const LinearMdpInstance& inst) const;
};

ExploreParams make_explore_params(const LinearMdpInstance& inst, int K, double delta,
                                  double lambda, double beta);

/// Optional hook mapping a realized reward to the value stored in the
/// dataset: (stream, round, h, s, a, realized) -> reported. Stream 0 is the
/// seller and is never transformed by callers in practice.
using RewardReporter = std::function<double(int, int, int, int, int, double)>;

struct ExploreEpisode {
    Trajectory reported;                           // rewards are reported values
    std::vector<std::vector<double>> true_rewards; // [h][stream]
    PolicyTable policy;                            // greedy policy executed
    double v1 = 0.0;                               // internal optimistic value at x1
};

struct ExploreResult {
    std::vector<ExploreEpisode> episodes;
    int K = 0;

    /// Assembles the reported-reward dataset handed to the exploitation phase.
    Dataset dataset(const LinearMdpInstance& inst) const;
};

/// Reward-free exploration: K episodes of backward LSVI over bonus-derived
/// internal rewards only. The policy computation reads logged states and
/// actions, never any reward sample; rewards are recorded purely for the
/// exploitation phase. Episode k uses the Gram built from episodes 1..k-1.
ExploreResult explore(const LinearMdpInstance& inst, const ExploreParams& params,
                      Rng& rng, const RewardReporter& reporter = {});

} // namespace mvcg
