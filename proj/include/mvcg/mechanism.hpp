#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mvcg/dataset.hpp"
#include "mvcg/env.hpp"
#include "mvcg/exploit.hpp"
#include "mvcg/explore.hpp"
#include "mvcg/policy.hpp"

namespace mvcg {

enum class Phase { Explore, Exploit };

/// Pointwise map from a realized reward to a reported one, always clipped to
/// [0, 1]. Bid ignores the sample and reports a fixed per-(h,s,a) table,
/// which realizes function bids ahead of time through the same interface.
struct ReportTransform {
    enum class Kind { Identity, Zero, One, Complement, Scale, Bid };
    Kind kind = Kind::Identity;
    double scale = 1.0;
    std::vector<double> bid; // h*S*A + s*A + a, only for Kind::Bid

    double apply(int h, int s, int a, int S, int A, double realized) const;
};

struct ReportingStrategy {
    enum class Kind { Truthful, Untruthful, Switch };
    Kind kind = Kind::Truthful;
    ReportTransform transform{};
    int switch_round = 1; // Switch: untruthful for t < switch_round, then truthful

    static ReportingStrategy truthful() { return {}; }
    static ReportingStrategy untruthful(ReportTransform t);
    static ReportingStrategy switching(ReportTransform t, int r);
};

/// What agent i reports at round t for a realized reward. The seller's own
/// stream is recorded truthfully and never goes through a strategy.
double reported_reward(const ReportingStrategy& strategy, int t, int h, int s, int a,
                       int S, int A, double realized);

struct MechanismConfig {
    int T = 0;
    int K = 0; // 0 picks ceil(T^{2/3})
    DataPolicy zeta1 = DataPolicy::Etc;
    ValueMode zeta2 = ValueMode::Optimistic;  // F estimate
    ValueMode zeta3 = ValueMode::Pessimistic; // G estimate
    double delta = 0.1;
    double lambda = 1.0;
    double c_beta = 0.1;
    BetaForm beta_form = BetaForm::Practical;
    std::uint64_t seed = 0;
    bool allow_degenerate = false; // permit T == K (exploration-only test runs)
    bool disable_cache = false;    // recompute the frozen-data plan every round
    int eval_threads = 1;          // per-round parallelism over agents

    int effective_K() const;
    void validate() const;
};

struct RoundRecord {
    int t = 0;
    Phase phase = Phase::Explore;
    int policy_id = 0; // into RunLog::policies
    Trajectory traj;   // rewards are reported values
    std::vector<std::vector<double>> true_rewards; // [h][stream]
    std::vector<double> prices; // per agent, zero during exploration
    std::vector<double> F, G;   // per agent, zero during exploration
};

struct RunLog {
    MechanismConfig config;
    int n = 0, H = 0, S = 0, A = 0;
    double R_max = 1.0;
    double beta = 0.0; // resolved bonus scale, echoed for provenance
    std::vector<PolicyTable> policies;
    std::vector<RoundRecord> rounds;
};

/// The full online loop: K rounds of reward-free exploration (no charging),
/// then per-round planning of the welfare policy, leave-one-out price
/// estimates F - G, execution, and charging. Frozen-data runs compute the
/// plan once and reuse it; growing-data runs append each new trajectory with
/// its reported rewards and replan.
RunLog run_mechanism(const LinearMdpInstance& inst,
                     const std::vector<ReportingStrategy>& strategies,
                     const MechanismConfig& config);

} // namespace mvcg
