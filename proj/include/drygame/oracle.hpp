#pragma once

// Exhaustive game-tree evaluation on exact (non-gridded) humidities. Kept
// deliberately plain: no memoization, no pruning.

#include <cstdint>
#include <optional>

#include "drygame/model.hpp"

namespace drygame {

struct OracleLimits {
  std::uint64_t max_nodes = 1000000;
};

struct OracleValue {
  double value = 0.0;
  double first_control = 0.0;  // NaN when every first control is infeasible
};

/// Sum over plies d = 1..n of the product of |T_i| * |Q_i| for i <= d.
std::uint64_t oracle_node_count(const GameConfig& cfg);

/// Throws InstanceTooLarge when oracle_node_count exceeds the limit.
OracleValue brute_force_value(const GameConfig& cfg, const OracleLimits& limits = {});

/// Guaranteed hitting step count, nullopt when unreachable.
std::optional<int> brute_force_time(const GameConfig& cfg, const OracleLimits& limits = {});

}  // namespace drygame
