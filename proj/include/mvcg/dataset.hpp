#pragma once

#include <vector>

#include "mvcg/env.hpp"
#include "mvcg/gram.hpp"

namespace mvcg {

/// The learner's only view of the world: logged (step, state, action,
/// next-state) tuples plus the n+1 reported reward streams. Episode indices
/// are contiguous from 1; the K marker separates exploration episodes from
/// exploitation ones.
struct Dataset {
    int H = 0;
    int n = 0;
    int S = 0;
    int A = 0;
    int d = 0;
    double R_max = 1.0;
    int K = 0;
    std::vector<Trajectory> episodes;

    void validate() const;
};

Dataset make_dataset(const LinearMdpInstance& inst, int K);

/// Sufficient statistics of a dataset prefix for least-squares value
/// iteration: per-step Gram matrices, visit/transition counts, and per-stream
/// reward sums at every (s, a). Appending an episode is O(H * (S + n));
/// regression moments are O(S * A * (S + d)) regardless of how many episodes
/// have been absorbed.
class DatasetIndex {
public:
    DatasetIndex(const LinearMdpInstance& inst, double lambda);

    /// Absorbs one episode. Trajectory rewards are the reported streams.
    void append(const Trajectory& traj);

    int episodes() const { return episodes_; }
    const GramState& gram(int h) const { return gram_[h]; }
    const LinearMdpInstance& instance() const { return *inst_; }

    int transition_count(int h, int s, int a, int sp) const {
        return counts_[h][(static_cast<std::size_t>(s) * A_ + a) * S_ + sp];
    }
    int visit_count(int h, int s, int a) const {
        return visits_[h][static_cast<std::size_t>(s) * A_ + a];
    }
    double reward_sum(int h, int s, int a, int stream) const {
        return reward_sums_[h][(static_cast<std::size_t>(s) * A_ + a) * (n_ + 1) + stream];
    }

    /// sum over logged pairs at step h of phi * V(next state). Reads only
    /// states and actions, never rewards.
    Eigen::VectorXd transition_moment(int h, const std::vector<double>& v_next) const;

    /// sum over logged pairs at step h of phi * (selected realized reward).
    /// `stream_weight[i]` is 0 or 1 per stream.
    Eigen::VectorXd reward_moment(int h, const std::vector<double>& stream_weight) const;

private:
    const LinearMdpInstance* inst_;
    int H_, S_, A_, n_, d_;
    std::vector<GramState> gram_;
    std::vector<std::vector<int>> counts_;        // [h][(s*A+a)*S + s']
    std::vector<std::vector<int>> visits_;        // [h][s*A+a]
    std::vector<std::vector<double>> reward_sums_; // [h][(s*A+a)*(n+1) + i]
    int episodes_ = 0;
};

/// Builds an index over the first `prefix_episodes` episodes of a dataset.
DatasetIndex build_index(const Dataset& data, const LinearMdpInstance& inst,
                         double lambda, int prefix_episodes);

} // namespace mvcg
