#include "mvcg/env.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mvcg {

namespace {

constexpr double kRowSumTol = 1e-12;

std::size_t sa_index(const LinearMdpInstance& inst, int s, int a) {
    return static_cast<std::size_t>(s) * inst.A + a;
}

} // namespace

const Eigen::VectorXd& LinearMdpInstance::feature(int s, int a) const {
    check_indices(0, s, a);
    return phi[sa_index(*this, s, a)];
}

void LinearMdpInstance::check_indices(int h, int s, int a) const {
    if (h < 0 || h >= H)
        throw std::invalid_argument("step index out of range: " + std::to_string(h));
    if (s < 0 || s >= S)
        throw std::invalid_argument("state index out of range: " + std::to_string(s));
    if (a < 0 || a >= A)
        throw std::invalid_argument("action index out of range: " + std::to_string(a));
}

void LinearMdpInstance::validate() const {
    if (H < 1 || n < 1 || S < 1 || A < 1 || d < 1)
        throw std::invalid_argument("instance sizes must be >= 1");
    if (R_max <= 0.0)
        throw std::invalid_argument("R_max must be positive");
    if (initial_state < 0 || initial_state >= S)
        throw std::invalid_argument("initial state out of range");
    if (phi.size() != static_cast<std::size_t>(S) * A)
        throw std::invalid_argument("feature table has wrong size");
    for (const auto& v : phi) {
        if (v.size() != d)
            throw std::invalid_argument("feature vector has wrong dimension");
        if (v.norm() > 1.0 + 1e-12)
            throw std::invalid_argument("feature norm exceeds 1");
    }
    if (trans.size() != static_cast<std::size_t>(H) * S * A * S)
        throw std::invalid_argument("transition table has wrong size");
    for (int h = 0; h < H; ++h)
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) {
                double sum = 0.0;
                for (double p : transition_row(h, s, a)) {
                    if (p < 0.0)
                        throw std::invalid_argument("negative transition probability");
                    sum += p;
                }
                if (std::abs(sum - 1.0) > kRowSumTol)
                    throw std::invalid_argument("transition row does not sum to 1");
            }
    if (means.size() != static_cast<std::size_t>(n + 1) * H * S * A)
        throw std::invalid_argument("reward table has wrong size");
    for (int i = 0; i <= n; ++i) {
        const double hi = stream_bound(i);
        for (int h = 0; h < H; ++h)
            for (int s = 0; s < S; ++s)
                for (int a = 0; a < A; ++a) {
                    const double m = reward_mean(i, h, s, a);
                    if (m < 0.0 || m > hi)
                        throw std::invalid_argument("reward mean out of range");
                }
    }
}

SampleResult sample_step(const LinearMdpInstance& inst, int h, int s, int a, Rng& rng) {
    inst.check_indices(h, s, a);

    const auto row = inst.transition_row(h, s, a);
    const double u = rng.uniform();
    int next = inst.S - 1;
    double acc = 0.0;
    for (int sp = 0; sp < inst.S; ++sp) {
        acc += row[sp];
        if (u < acc) {
            next = sp;
            break;
        }
    }

    SampleResult out;
    out.next_state = next;
    out.rewards.resize(inst.n + 1);
    for (int i = 0; i <= inst.n; ++i) {
        const double mean = inst.reward_mean(i, h, s, a);
        switch (inst.noise) {
        case NoiseModel::Deterministic:
            out.rewards[i] = mean;
            break;
        case NoiseModel::Bernoulli: {
            // Seller draws R_max * Ber(mean / R_max); agents draw Ber(mean).
            const double scale = inst.stream_bound(i);
            out.rewards[i] = rng.bernoulli(mean / scale) ? scale : 0.0;
            break;
        }
        }
    }
    return out;
}

LinearMdpInstance make_onehot_tabular(const OnehotSpec& spec) {
    if (spec.states < 1 || spec.actions < 1 || spec.horizon < 1 || spec.agents < 1)
        throw std::invalid_argument("onehot spec sizes must be >= 1");
    if (spec.r_max <= 0.0)
        throw std::invalid_argument("r_max must be positive");

    LinearMdpInstance inst;
    inst.H = spec.horizon;
    inst.n = spec.agents;
    inst.R_max = spec.r_max;
    inst.S = spec.states;
    inst.A = spec.actions;
    inst.initial_state = 0;
    inst.d = spec.states * spec.actions;
    inst.noise = spec.noise;

    inst.phi.reserve(static_cast<std::size_t>(inst.S) * inst.A);
    for (int s = 0; s < inst.S; ++s)
        for (int a = 0; a < inst.A; ++a) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(inst.d);
            e[s * inst.A + a] = 1.0;
            inst.phi.push_back(std::move(e));
        }

    Rng rng(spec.seed);
    inst.trans.resize(static_cast<std::size_t>(inst.H) * inst.S * inst.A * inst.S);
    for (int h = 0; h < inst.H; ++h)
        for (int s = 0; s < inst.S; ++s)
            for (int a = 0; a < inst.A; ++a) {
                // Exponential draws normalized in place: a flat Dirichlet row.
                double sum = 0.0;
                std::vector<double> g(inst.S);
                for (int sp = 0; sp < inst.S; ++sp) {
                    g[sp] = -std::log(1.0 - rng.uniform());
                    sum += g[sp];
                }
                double* row = &inst.trans[((static_cast<std::size_t>(h) * inst.S + s) *
                                               inst.A + a) * inst.S];
                for (int sp = 0; sp < inst.S; ++sp)
                    row[sp] = g[sp] / sum;
            }

    inst.means.resize(static_cast<std::size_t>(inst.n + 1) * inst.H * inst.S * inst.A);
    for (int i = 0; i <= inst.n; ++i)
        for (int h = 0; h < inst.H; ++h)
            for (int s = 0; s < inst.S; ++s)
                for (int a = 0; a < inst.A; ++a)
                    inst.reward_mean(i, h, s, a) = rng.uniform() * inst.stream_bound(i);

    inst.validate();
    return inst;
}

LinearMdpInstance make_hard_instance(int n, int H, int A, HardVariant variant,
                                     double delta) {
    if (H < 2)
        throw std::invalid_argument("hard instance needs H >= 2");
    if (A < n + 2)
        throw std::invalid_argument("hard instance needs A >= n + 2");
    if (n < 1)
        throw std::invalid_argument("hard instance needs n >= 1");
    if (variant == HardVariant::Theta1) {
        const double hi = n > 1 ? 1.0 / (2.0 * n - 2.0) : 0.5;
        if (!(delta > 0.0 && delta < hi))
            throw std::invalid_argument("delta outside (0, 1/(2n-2))");
    }

    LinearMdpInstance inst;
    inst.H = H;
    inst.n = n;
    inst.R_max = 1.0; // seller reward is identically zero; 1 is only the bound
    inst.S = n + 3;   // x0 .. x_{n+2}
    inst.A = A;
    inst.initial_state = 0;
    inst.d = n + 2;
    inst.noise = NoiseModel::Bernoulli;

    // First-step fan-out target, shared by features and transitions. Actions
    // are 0-based: action a plays the (a+1)-th arm, everything past the
    // (n+1)-th arm collapses onto the last absorbing state.
    const auto fanout = [&](int a) { return std::min(a, n + 1) + 1; };

    inst.phi.reserve(static_cast<std::size_t>(inst.S) * inst.A);
    for (int s = 0; s < inst.S; ++s)
        for (int a = 0; a < inst.A; ++a) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(inst.d);
            if (s == 0)
                e[fanout(a) - 1] = 1.0;
            else
                e[s - 1] = 1.0;
            inst.phi.push_back(std::move(e));
        }

    // Transitions are step-independent: x0 fans out, every other state is
    // absorbing. This is exactly the kernel induced by the basis features.
    inst.trans.assign(static_cast<std::size_t>(inst.H) * inst.S * inst.A * inst.S, 0.0);
    for (int h = 0; h < inst.H; ++h)
        for (int s = 0; s < inst.S; ++s)
            for (int a = 0; a < inst.A; ++a) {
                const int target = s == 0 ? fanout(a) : s;
                inst.trans[(((static_cast<std::size_t>(h) * inst.S + s) * inst.A + a) *
                                inst.S) + target] = 1.0;
            }

    const double big = variant == HardVariant::Theta0 ? 0.5 : 0.5 + delta;
    // Mean at an absorbing state, as seen by agent j. State index s in
    // 1..n is the leave-one-out state for agent s; n+1 pays everyone 1/2;
    // n+2 pays everyone 1/8.
    const auto absorbing_mean = [&](int j, int s) {
        if (s >= 1 && s <= n)
            return j == s ? 0.0 : big;
        if (s == n + 1)
            return 0.5;
        return 0.125;
    };

    inst.means.assign(static_cast<std::size_t>(inst.n + 1) * inst.H * inst.S * inst.A, 0.0);
    for (int j = 1; j <= n; ++j)
        for (int h = 1; h < inst.H; ++h)
            for (int s = 0; s < inst.S; ++s)
                for (int a = 0; a < inst.A; ++a) {
                    // x0 is unreachable past the first step; giving it the mean
                    // of its fan-out target keeps the reward tables exactly
                    // linear in the features.
                    const int site = s == 0 ? fanout(a) : s;
                    inst.reward_mean(j, h, s, a) = absorbing_mean(j, site);
                }

    inst.validate();
    return inst;
}

LinearMdpInstance build_instance(const InstanceSpec& spec) {
    NoiseModel noise;
    if (spec.noise == "bernoulli")
        noise = NoiseModel::Bernoulli;
    else if (spec.noise == "deterministic")
        noise = NoiseModel::Deterministic;
    else
        throw std::invalid_argument("unknown noise model: " + spec.noise);

    if (spec.kind == "onehot") {
        OnehotSpec os;
        os.states = spec.states;
        os.actions = spec.actions;
        os.horizon = spec.horizon;
        os.agents = spec.agents;
        os.r_max = spec.r_max;
        os.seed = spec.seed;
        os.noise = noise;
        return make_onehot_tabular(os);
    }
    if (spec.kind == "hard") {
        HardVariant variant;
        if (spec.variant == "theta0")
            variant = HardVariant::Theta0;
        else if (spec.variant == "theta1")
            variant = HardVariant::Theta1;
        else
            throw std::invalid_argument("unknown hard variant: " + spec.variant);
        LinearMdpInstance inst =
            make_hard_instance(spec.agents, spec.horizon, spec.actions, variant, spec.delta);
        inst.noise = noise;
        return inst;
    }
    throw std::invalid_argument("unknown instance kind: " + spec.kind);
}

} // namespace mvcg
