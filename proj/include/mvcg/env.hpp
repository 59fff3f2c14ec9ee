#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mvcg/rng.hpp"

namespace mvcg {

enum class NoiseModel { Bernoulli, Deterministic };

struct StepRecord {
    int h = 0;
    int state = 0;
    int action = 0;
    int next_state = 0;
};

/// One episode of interaction: exactly H step records plus the realized
/// reward of every stream (seller 0 plus agents 1..n) at each step.
struct Trajectory {
    int episode = 0; // 1-based
    std::vector<StepRecord> steps;
    std::vector<std::vector<double>> rewards; // [h][stream 0..n]
};

/// Finite episodic MDP with an explicit feature table. Generators guarantee
/// that transitions and mean rewards factor linearly through the features,
/// so instances built here are valid linear MDPs by construction.
///
/// Steps h are 0-based (0..H-1). Reward stream 0 is the seller, bounded by
/// R_max; streams 1..n are agents, bounded by 1.
struct LinearMdpInstance {
    int H = 0;
    int n = 0;
    double R_max = 1.0;
    int S = 0;
    int A = 0;
    int initial_state = 0;
    int d = 0;
    NoiseModel noise = NoiseModel::Bernoulli;

    std::vector<Eigen::VectorXd> phi; // s * A + a
    std::vector<double> trans;        // ((h*S + s)*A + a)*S + s'
    std::vector<double> means;        // ((i*H + h)*S + s)*A + a

    const Eigen::VectorXd& feature(int s, int a) const;

    std::span<const double> transition_row(int h, int s, int a) const {
        return {&trans[(((static_cast<std::size_t>(h) * S + s) * A + a) * S)],
                static_cast<std::size_t>(S)};
    }

    double reward_mean(int i, int h, int s, int a) const {
        return means[((static_cast<std::size_t>(i) * H + h) * S + s) * A + a];
    }
    double& reward_mean(int i, int h, int s, int a) {
        return means[((static_cast<std::size_t>(i) * H + h) * S + s) * A + a];
    }

    double stream_bound(int i) const { return i == 0 ? R_max : 1.0; }

    /// Throws std::invalid_argument if any structural invariant is violated
    /// (row sums, feature norms, reward ranges).
    void validate() const;

    void check_indices(int h, int s, int a) const;
};

struct SampleResult {
    int next_state = 0;
    std::vector<double> rewards; // stream 0..n
};

/// Draws a successor state and one realized reward per stream. Pure function
/// of the inputs and the rng state; the rng consumption pattern does not
/// depend on the reward means.
SampleResult sample_step(const LinearMdpInstance& inst, int h, int s, int a, Rng& rng);

struct OnehotSpec {
    int states = 2;
    int actions = 2;
    int horizon = 2;
    int agents = 1;
    double r_max = 1.0;
    std::uint64_t seed = 0;
    NoiseModel noise = NoiseModel::Bernoulli;
};

/// Canonical tabular family with phi(s,a) = e_{s*A+a}, d = S*A. Transition
/// rows and reward means are drawn from the seed; the one-hot embedding makes
/// the linear factorization exact for any tabular MDP.
LinearMdpInstance make_onehot_tabular(const OnehotSpec& spec);

enum class HardVariant { Theta0, Theta1 };

/// The n+3-state, d = n+2 family with a fan-out first step and absorbing
/// tails. Theta0 rewards the shared state x_{n+1} and each leave-one-out
/// state x_i equally per excluded agent; Theta1 raises the leave-one-out
/// means to 1/2 + delta. Seller reward is identically zero.
LinearMdpInstance make_hard_instance(int n, int H, int A, HardVariant variant,
                                     double delta = 0.0);

/// Generator parameters in loadable/serializable form. This is what configs
/// parse into and what run logs echo so a run can be replayed standalone.
struct InstanceSpec {
    std::string kind = "onehot"; // onehot | hard
    int states = 2;
    int actions = 2;
    int horizon = 2;
    int agents = 1;
    double r_max = 1.0;
    std::uint64_t seed = 0;
    std::string noise = "bernoulli"; // bernoulli | deterministic
    std::string variant = "theta0";  // hard only: theta0 | theta1
    double delta = 0.0;              // hard theta1 only

    bool operator==(const InstanceSpec&) const = default;
};

LinearMdpInstance build_instance(const InstanceSpec& spec);

} // namespace mvcg
