#pragma once

#include <vector>

#include "mvcg/dataset.hpp"
#include "mvcg/env.hpp"
#include "mvcg/policy.hpp"

namespace mvcg {

enum class DataPolicy { Etc, Ewc };          // freeze the dataset vs keep appending
enum class ValueMode { Optimistic, Pessimistic };

/// Selects which reward streams enter the regression target and the value
/// bounds: the full sum R, the leave-one-out sum R minus agent i, or a custom
/// mask over streams 0..n (stream 0 is the seller).
class RewardSelector {
public:
    static RewardSelector total(int n);
    static RewardSelector without_agent(int n, int i); // i in 1..n, seller kept
    static RewardSelector custom(int n, std::vector<int> streams);

    int n() const { return static_cast<int>(mask_.size()) - 1; }
    bool includes(int stream) const { return mask_[stream] != 0; }
    const std::vector<double>& weights() const { return mask_; }

    /// Sum of the selected entries of a realized reward row.
    double pick(const std::vector<double>& rewards) const;

    /// Sum of selected true means at (h, s, a); the oracle-side counterpart.
    double mean_pick(const LinearMdpInstance& inst, int h, int s, int a) const;

    /// Sum of the selected per-step upper bounds (1 per agent, R_max for the
    /// seller).
    double step_bound(double r_max) const;

private:
    explicit RewardSelector(std::vector<double> mask);
    std::vector<double> mask_; // 0/1 per stream
};

/// Remaining-value truncation at 0-based step h: step_bound * (H - h).
double truncation_alpha(const RewardSelector& sel, double r_max, int h, int H);

/// Episode indices feeding the Gram matrix and regression at exploitation
/// round t (1-based): {1..K} when frozen, {1..t-1} when growing. Only defined
/// for t > K.
std::vector<int> index_set(DataPolicy zeta1, int K, int t);

struct PlanParams {
    double beta = 1.0;
    double B = 0.0; // regression clip bound H * (n + R_max)
    double lambda = 1.0;
};

struct PlanResult {
    double v1 = 0.0;
    PolicyTable policy;
    std::vector<Eigen::VectorXd> weights;  // per step
    std::vector<std::vector<double>> q;    // [h][s*A + a]
    ValueMode mode = ValueMode::Optimistic;
    DataPolicy data_policy = DataPolicy::Etc; // set by the round-indexed form
};

struct EvalResult {
    double v1 = 0.0;
    std::vector<std::vector<double>> q;
};

/// Backward LSVI over the indexed data: ridge weights against the selected
/// realized rewards plus the bootstrapped next value, clipped linear fit,
/// bonus added (optimistic) or subtracted (pessimistic), truncated to
/// [0, alpha_h]. Returns the greedy policy and the value at the initial state.
PlanResult plan(const LinearMdpInstance& inst, const DatasetIndex& index,
                const RewardSelector& sel, ValueMode mode, const PlanParams& params);

/// Same backward pass but the value at each state follows the supplied
/// policy instead of the greedy maximum.
EvalResult evaluate_policy(const LinearMdpInstance& inst, const DatasetIndex& index,
                           const RewardSelector& sel, ValueMode mode,
                           const PolicyTable& policy, const PlanParams& params);

/// Round-indexed forms: build the index over the episodes named by
/// index_set(zeta1, K, t) and run the corresponding pass. t must exceed the
/// dataset's K marker.
PlanResult plan(const LinearMdpInstance& inst, const Dataset& data,
                const RewardSelector& sel, DataPolicy zeta1, ValueMode zeta2, int t,
                const PlanParams& params);

EvalResult evaluate_policy(const LinearMdpInstance& inst, const Dataset& data,
                           const RewardSelector& sel, DataPolicy zeta1, ValueMode zeta3,
                           int t, const PolicyTable& policy, const PlanParams& params);

} // namespace mvcg
