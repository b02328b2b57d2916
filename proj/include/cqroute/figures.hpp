#pragma once

#include <vector>

#include "cqroute/network_model.hpp"

namespace cqroute {

/// Ternary set k (1..4) used across the published scenarios:
/// (g, delta) = (60, 500), (61, 600), (62, 700), (63, 800) in units of J.
TernarySet standard_set(int k);

/// Figure ids with a built-in scenario (3..11).
std::vector<int> figure_ids();

/// Receivers 1..N carry standard sets 1..N, J = 1, frame offset 0.
/// Throws ConfigError for an unknown id.
NetworkConfig figure_config(int id);

}  // namespace cqroute
