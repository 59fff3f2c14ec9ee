#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mvcg {

/// Deterministic nonstationary policy: one action per (step, state).
struct PolicyTable {
    int H = 0;
    int S = 0;
    std::vector<int> action; // h * S + s

    PolicyTable() = default;
    PolicyTable(int horizon, int states)
        : H(horizon), S(states), action(static_cast<std::size_t>(horizon) * states, 0) {}

    int at(int h, int s) const { return action[static_cast<std::size_t>(h) * S + s]; }
    void set(int h, int s, int a) { action[static_cast<std::size_t>(h) * S + s] = a; }

    bool operator==(const PolicyTable& other) const = default;
};

} // namespace mvcg
