#include "cqroute/figures.hpp"

#include <array>
#include <string>

#include "cqroute/errors.hpp"

namespace cqroute {

namespace {

struct Scenario {
    int figure;
    int n_receivers;
    int active_set;
};

constexpr std::array<Scenario, 9> kScenarios{{
    {3, 2, 1}, {4, 2, 2},
    {5, 3, 1}, {6, 3, 2}, {7, 3, 3},
    {8, 4, 1}, {9, 4, 2}, {10, 4, 3}, {11, 4, 4},
}};

}  // namespace

TernarySet standard_set(int k) {
    if (k < 1 || k > 4) throw ConfigError("standard ternary sets are numbered 1..4");
    return {59.0 + k, 400.0 + 100.0 * k};
}

std::vector<int> figure_ids() {
    std::vector<int> ids;
    for (const auto& s : kScenarios) ids.push_back(s.figure);
    return ids;
}

NetworkConfig figure_config(int id) {
    for (const auto& s : kScenarios) {
        if (s.figure != id) continue;
        NetworkConfig config;
        config.n_receivers = s.n_receivers;
        config.hop = 1.0;
        config.active_sender = s.active_set;
        config.frame_offset = 0.0;
        for (int k = 1; k <= s.n_receivers; ++k) config.sets.push_back(standard_set(k));
        return config;
    }
    throw ConfigError("no built-in scenario for figure " + std::to_string(id) + " (expected 3..11)");
}

}  // namespace cqroute
