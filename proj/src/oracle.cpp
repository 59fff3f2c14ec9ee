#include "mvcg/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace mvcg {

DpResult exact_plan(const LinearMdpInstance& inst, const RewardSelector& sel) {
    const int S = inst.S, A = inst.A, H = inst.H;
    DpResult out;
    out.value.assign(H + 1, std::vector<double>(S, 0.0));
    out.policy = PolicyTable(H, S);

    for (int h = H - 1; h >= 0; --h) {
        const std::vector<double>& next = out.value[h + 1];
        for (int s = 0; s < S; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            int best_a = 0;
            for (int a = 0; a < A; ++a) {
                double q = sel.mean_pick(inst, h, s, a);
                const auto row = inst.transition_row(h, s, a);
                for (int sp = 0; sp < S; ++sp)
                    q += row[sp] * next[sp];
                if (q > best) {
                    best = q;
                    best_a = a;
                }
            }
            out.value[h][s] = best;
            out.policy.set(h, s, best_a);
        }
    }
    return out;
}

std::vector<std::vector<double>> exact_eval(const LinearMdpInstance& inst,
                                            const RewardSelector& sel,
                                            const PolicyTable& policy) {
    if (policy.H != inst.H || policy.S != inst.S)
        throw std::invalid_argument("policy table does not match the instance");
    const int S = inst.S, H = inst.H;
    std::vector<std::vector<double>> value(H + 1, std::vector<double>(S, 0.0));
    for (int h = H - 1; h >= 0; --h)
        for (int s = 0; s < S; ++s) {
            const int a = policy.at(h, s);
            double v = sel.mean_pick(inst, h, s, a);
            const auto row = inst.transition_row(h, s, a);
            for (int sp = 0; sp < S; ++sp)
                v += row[sp] * value[h + 1][sp];
            value[h][s] = v;
        }
    return value;
}

std::vector<double> exact_eval_streams(const LinearMdpInstance& inst,
                                       const PolicyTable& policy) {
    if (policy.H != inst.H || policy.S != inst.S)
        throw std::invalid_argument("policy table does not match the instance");
    const int S = inst.S, H = inst.H, m = inst.n + 1;
    // value[s*m + i] = V_h^pi(s; r_i)
    std::vector<double> next(static_cast<std::size_t>(S) * m, 0.0);
    std::vector<double> cur(static_cast<std::size_t>(S) * m, 0.0);
    for (int h = H - 1; h >= 0; --h) {
        for (int s = 0; s < S; ++s) {
            const int a = policy.at(h, s);
            const auto row = inst.transition_row(h, s, a);
            for (int i = 0; i < m; ++i) {
                double v = inst.reward_mean(i, h, s, a);
                for (int sp = 0; sp < S; ++sp)
                    v += row[sp] * next[static_cast<std::size_t>(sp) * m + i];
                cur[static_cast<std::size_t>(s) * m + i] = v;
            }
        }
        std::swap(next, cur);
    }
    std::vector<double> out(m);
    for (int i = 0; i < m; ++i)
        out[i] = next[static_cast<std::size_t>(inst.initial_state) * m + i];
    return out;
}

void VcgBenchmark::check() const {
    constexpr double tol = 1e-9;
    double u_sum = 0.0;
    for (const auto& ab : agents) {
        if (ab.price < -tol)
            throw std::logic_error("benchmark price is negative");
        if (ab.utility < -tol)
            throw std::logic_error("benchmark agent utility is negative");
        if (std::abs(ab.price - (ab.v_minus_opt - ab.v_star_minus)) > tol)
            throw std::logic_error("benchmark price identity failed");
        u_sum += ab.utility;
    }
    // Prices cancel: seller utility plus agent utilities equals welfare.
    if (std::abs(seller_utility + u_sum - v_star) > tol)
        throw std::logic_error("benchmark welfare accounting failed");
}

VcgBenchmark vcg_benchmark(const LinearMdpInstance& inst) {
    VcgBenchmark bench;
    bench.n = inst.n;

    const DpResult star = exact_plan(inst, RewardSelector::total(inst.n));
    bench.v_star = star.value[0][inst.initial_state];
    bench.pi_star = star.policy;

    double minus_sum = 0.0;
    bench.agents.reserve(inst.n);
    for (int i = 1; i <= inst.n; ++i) {
        const RewardSelector sel = RewardSelector::without_agent(inst.n, i);
        AgentBenchmark ab;
        DpResult minus = exact_plan(inst, sel);
        ab.pi_minus = std::move(minus.policy);
        ab.v_minus_opt = minus.value[0][inst.initial_state];
        ab.v_star_minus = exact_eval(inst, sel, bench.pi_star)[0][inst.initial_state];
        ab.price = ab.v_minus_opt - ab.v_star_minus;
        ab.utility = bench.v_star - ab.v_minus_opt;
        minus_sum += ab.v_minus_opt;
        bench.agents.push_back(std::move(ab));
    }
    bench.seller_utility = minus_sum - (inst.n - 1) * bench.v_star;
    bench.check();
    return bench;
}

} // namespace mvcg
