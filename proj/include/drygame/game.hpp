#pragma once

// Forward play of the drying game and numerical checks of the saddle property.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <variant>
#include <vector>

#include "drygame/model.hpp"
#include "drygame/solver.hpp"

namespace drygame {

struct ConstantNature {
  double alpha = 0.0;
};

/// One disturbance per step, exactly `steps` entries.
struct ScheduleNature {
  std::vector<double> alphas;
};

/// Answers the operator's control with the solver's per-stage maximizer.
struct ResponderNature {
  std::shared_ptr<const NatureResponder> responder;
};

/// Explicit (step, node, control index) -> alpha. Missing entries fall back to
/// the first disturbance-grid value of the step.
struct TableNature {
  std::map<std::tuple<int, std::size_t, int>, double> entries;
};

using NatureStrategy = std::variant<ConstantNature, ScheduleNature, ResponderNature, TableNature>;

/// Realized play. Arrays of states have one more entry than arrays of moves.
struct Trajectory {
  std::vector<double> tau;
  std::vector<double> x;
  std::vector<bool> clamped;  // x[i] was produced by clamping the Euler image
  std::vector<double> control;
  std::vector<double> disturbance;
  std::vector<double> stage_energy;
  std::vector<double> cum_energy;
  std::optional<int> terminal_step;  // first i with x[i] in the terminal set
  int clamp_events = 0;

  int moves() const { return static_cast<int>(control.size()); }
  double energy() const { return cum_energy.empty() ? 0.0 : cum_energy.back(); }
  /// Energy when the terminal set was reached, +inf otherwise.
  double payoff() const;
};

/// Rolls the game forward from cfg.x0. The operator reads the policy at the
/// nearest state node. Throws StrategyMismatch if the policy was built on other
/// grids, InvalidRange if nature emits a disturbance outside the step's range.
Trajectory simulate(const GameConfig& cfg, const OperatorPolicy& policy,
                    const NatureStrategy& nature);

struct BestResponse {
  NatureStrategy strategy;
  double payoff = 0.0;
  Trajectory trajectory;
};

inline constexpr std::uint64_t kMaxEnumeratedSchedules = 100000;

/// Nature's best reply to a fixed operator policy. With a value table the reply
/// is chosen by one-step lookahead on it; without one every disturbance-grid
/// schedule is enumerated (InstanceTooLarge beyond kMaxEnumeratedSchedules).
BestResponse best_response_nature(const GameConfig& cfg, const OperatorPolicy& policy,
                                  const ValueTable* values = nullptr);

struct SaddleReport {
  double epsilon = 0.0;
  double value = 0.0;  // payoff of (policy, responder)
  std::size_t left_tested = 0;
  double left_max_violation = 0.0;  // max over nature deviations of payoff - value
  bool left_exhaustive = false;
  std::size_t right_tested = 0;
  double right_max_violation = 0.0;  // max over operator deviations of value - payoff
  std::size_t operator_family_size = 0;
  bool pass = false;
};

/// Checks payoff(policy, dev) <= V + eps for nature deviations (exhaustive
/// disturbance schedules when there are at most `nature_deviations` of them,
/// otherwise constants plus seeded random schedules) and payoff(dev, responder)
/// >= V - eps for operator deviations drawn from single-node control swaps and
/// constant-control policies (the whole family when it fits in
/// `operator_deviations`, otherwise a seeded sample).
SaddleReport verify_saddle(const GameConfig& cfg, const OperatorPolicy& policy,
                           const NatureResponder& responder, double epsilon,
                           std::size_t operator_deviations, std::size_t nature_deviations,
                           std::uint64_t seed = 0x5eed);

/// Policy that always applies control-grid index `control` (clamped to each step's grid).
OperatorPolicy constant_policy(const Grids& grids, int control);

/// Number of disturbance-grid schedules, saturating at UINT64_MAX.
std::uint64_t schedule_count(const Grids& grids);

/// The schedule with mixed-radix index `code` (step 1 is the least significant digit).
std::vector<double> schedule_from_code(const Grids& grids, std::uint64_t code);

}  // namespace drygame
