#pragma once

// Test-only helpers. The solvers and enumerators here are deliberately
// independent of the library's implementation paths so they can serve as
// oracles for it.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mvcg/env.hpp"
#include "mvcg/exploit.hpp"
#include "mvcg/oracle.hpp"
#include "mvcg/rng.hpp"

namespace testsupport {

/// Dense linear solve by Gauss-Jordan elimination with partial pivoting.
/// Row-major A of size n*n.
inline std::vector<double> gauss_solve(std::vector<double> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col]))
                pivot = r;
        if (a[pivot * n + col] == 0.0)
            throw std::runtime_error("singular matrix in gauss_solve");
        if (pivot != col) {
            for (int c = 0; c < n; ++c)
                std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (int c = 0; c < n; ++c)
            a[col * n + c] *= inv;
        b[col] *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == col)
                continue;
            const double f = a[r * n + col];
            if (f == 0.0)
                continue;
            for (int c = 0; c < n; ++c)
                a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    return b;
}

/// Exhaustive search over all |A|^(H*S) deterministic policies. Returns the
/// best initial-state value found; optionally records every enumerated value.
inline double enumerate_best_policy(const mvcg::LinearMdpInstance& inst,
                                    const mvcg::RewardSelector& sel,
                                    std::vector<double>* all_values = nullptr) {
    const int slots = inst.H * inst.S;
    double total = 1;
    for (int i = 0; i < slots; ++i) {
        total *= inst.A;
        if (total > 4e6)
            throw std::runtime_error("policy space too large to enumerate");
    }
    mvcg::PolicyTable policy(inst.H, inst.S);
    double best = -1e300;
    while (true) {
        const auto value = mvcg::exact_eval(inst, sel, policy);
        const double v1 = value[0][inst.initial_state];
        best = std::max(best, v1);
        if (all_values)
            all_values->push_back(v1);
        // Increment the policy like a base-A counter.
        int slot = 0;
        while (slot < slots) {
            if (++policy.action[slot] < inst.A)
                break;
            policy.action[slot] = 0;
            ++slot;
        }
        if (slot == slots)
            break;
    }
    return best;
}

/// Small random tabular instance for property tests.
inline mvcg::LinearMdpInstance random_small_instance(mvcg::Rng& rng, int max_s = 3,
                                                     int max_a = 3, int max_h = 3,
                                                     int max_n = 3) {
    mvcg::OnehotSpec spec;
    spec.states = 1 + rng.uniform_int(max_s);
    spec.actions = 1 + rng.uniform_int(max_a);
    spec.horizon = 1 + rng.uniform_int(max_h);
    spec.agents = 1 + rng.uniform_int(max_n);
    spec.r_max = 0.5 + rng.uniform();
    spec.seed = rng.raw();
    return mvcg::make_onehot_tabular(spec);
}

/// Hand-built deterministic 2-state, 2-action world: action a moves to state
/// a at every step, rewards are exact means. Agent means are chosen so action
/// `good_action` strictly dominates everywhere by a wide margin.
inline mvcg::LinearMdpInstance deterministic_two_state(int H, int good_action = 1) {
    mvcg::LinearMdpInstance inst;
    inst.H = H;
    inst.n = 1;
    inst.R_max = 1.0;
    inst.S = 2;
    inst.A = 2;
    inst.initial_state = 0;
    inst.d = 4;
    inst.noise = mvcg::NoiseModel::Deterministic;
    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(4);
            e[s * 2 + a] = 1.0;
            inst.phi.push_back(std::move(e));
        }
    inst.trans.assign(static_cast<std::size_t>(H) * 2 * 2 * 2, 0.0);
    for (int h = 0; h < H; ++h)
        for (int s = 0; s < 2; ++s)
            for (int a = 0; a < 2; ++a)
                inst.trans[(((static_cast<std::size_t>(h) * 2 + s) * 2 + a) * 2) + a] = 1.0;
    inst.means.assign(static_cast<std::size_t>(2) * H * 2 * 2, 0.0);
    for (int h = 0; h < H; ++h)
        for (int s = 0; s < 2; ++s)
            for (int a = 0; a < 2; ++a) {
                inst.reward_mean(0, h, s, a) = a == good_action ? 0.8 : 0.1;
                inst.reward_mean(1, h, s, a) = a == good_action ? 0.9 : 0.05;
            }
    inst.validate();
    return inst;
}

} // namespace testsupport
