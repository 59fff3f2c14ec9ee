#include "mvcg/dataset.hpp"

#include <stdexcept>
#include <string>

namespace mvcg {

void Dataset::validate() const {
    if (K < 0 || K > static_cast<int>(episodes.size()))
        throw std::invalid_argument("dataset K marker out of range");
    for (std::size_t k = 0; k < episodes.size(); ++k) {
        const Trajectory& ep = episodes[k];
        if (ep.episode != static_cast<int>(k) + 1)
            throw std::invalid_argument("episode indices must be contiguous from 1");
        if (static_cast<int>(ep.steps.size()) != H)
            throw std::invalid_argument("episode " + std::to_string(ep.episode) +
                                        " does not have H steps");
        if (static_cast<int>(ep.rewards.size()) != H)
            throw std::invalid_argument("episode reward rows must match H");
        for (const auto& row : ep.rewards)
            if (static_cast<int>(row.size()) != n + 1)
                throw std::invalid_argument("episode reward row must have n+1 streams");
    }
}

Dataset make_dataset(const LinearMdpInstance& inst, int K) {
    Dataset d;
    d.H = inst.H;
    d.n = inst.n;
    d.S = inst.S;
    d.A = inst.A;
    d.d = inst.d;
    d.R_max = inst.R_max;
    d.K = K;
    return d;
}

DatasetIndex::DatasetIndex(const LinearMdpInstance& inst, double lambda)
    : inst_(&inst), H_(inst.H), S_(inst.S), A_(inst.A), n_(inst.n), d_(inst.d) {
    gram_.reserve(H_);
    for (int h = 0; h < H_; ++h)
        gram_.emplace_back(d_, lambda);
    counts_.assign(H_, std::vector<int>(static_cast<std::size_t>(S_) * A_ * S_, 0));
    visits_.assign(H_, std::vector<int>(static_cast<std::size_t>(S_) * A_, 0));
    reward_sums_.assign(H_,
                        std::vector<double>(static_cast<std::size_t>(S_) * A_ * (n_ + 1), 0.0));
}

void DatasetIndex::append(const Trajectory& traj) {
    if (static_cast<int>(traj.steps.size()) != H_)
        throw std::invalid_argument("trajectory does not have H steps");
    for (int h = 0; h < H_; ++h) {
        const StepRecord& st = traj.steps[h];
        const std::size_t sa = static_cast<std::size_t>(st.state) * A_ + st.action;
        gram_[h].add(inst_->feature(st.state, st.action));
        counts_[h][sa * S_ + st.next_state] += 1;
        visits_[h][sa] += 1;
        for (int i = 0; i <= n_; ++i)
            reward_sums_[h][sa * (n_ + 1) + i] += traj.rewards[h][i];
    }
    ++episodes_;
}

Eigen::VectorXd DatasetIndex::transition_moment(int h, const std::vector<double>& v_next) const {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(d_);
    for (int s = 0; s < S_; ++s)
        for (int a = 0; a < A_; ++a) {
            const std::size_t sa = static_cast<std::size_t>(s) * A_ + a;
            if (visits_[h][sa] == 0)
                continue;
            double acc = 0.0;
            for (int sp = 0; sp < S_; ++sp) {
                const int c = counts_[h][sa * S_ + sp];
                if (c != 0)
                    acc += c * v_next[sp];
            }
            if (acc != 0.0)
                b += inst_->phi[sa] * acc;
        }
    return b;
}

Eigen::VectorXd DatasetIndex::reward_moment(int h, const std::vector<double>& stream_weight) const {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(d_);
    for (int s = 0; s < S_; ++s)
        for (int a = 0; a < A_; ++a) {
            const std::size_t sa = static_cast<std::size_t>(s) * A_ + a;
            if (visits_[h][sa] == 0)
                continue;
            double acc = 0.0;
            for (int i = 0; i <= n_; ++i)
                acc += stream_weight[i] * reward_sums_[h][sa * (n_ + 1) + i];
            if (acc != 0.0)
                b += inst_->phi[sa] * acc;
        }
    return b;
}

DatasetIndex build_index(const Dataset& data, const LinearMdpInstance& inst,
                         double lambda, int prefix_episodes) {
    if (prefix_episodes < 0 || prefix_episodes > static_cast<int>(data.episodes.size()))
        throw std::invalid_argument("index prefix out of range");
    DatasetIndex index(inst, lambda);
    for (int k = 0; k < prefix_episodes; ++k)
        index.append(data.episodes[k]);
    return index;
}

} // namespace mvcg
