#include "testing/instances.hpp"

namespace drygame::testing {

GameConfig grid_aligned() {
  GameConfig cfg;
  cfg.horizon = 3.0;
  cfg.steps = 3;
  cfg.x0 = 0.7;
  cfg.state_grid = {0.0, 1.0, 11};
  cfg.per_step = {{{40.0, 80.0}, {0.0, 0.2}}};
  cfg.control_points = 3;
  cfg.disturbance_points = 3;
  cfg.dynamics = AffineDynamics{-0.005, 1.0, 0.0};
  cfg.energy = {5.0, 0.5, 20.0};
  cfg.terminal = {0.0, 0.2};
  cfg.objective = Objective::kEnergy;
  return cfg;
}

GameConfig lewis_benchmark() {
  GameConfig cfg;
  cfg.horizon = 10.0;
  cfg.steps = 10;
  cfg.x0 = 0.8;
  cfg.state_grid = {0.0, 1.0, 11};
  cfg.per_step = {{{40.0, 80.0}, {0.05, 0.25}}};
  cfg.control_points = 5;
  cfg.disturbance_points = 5;
  cfg.dynamics = LewisDynamics{0.2, 0.03, 50.0};
  cfg.energy = {0.5, 1.0, 20.0};
  cfg.terminal = {0.0, 0.15};
  cfg.objective = Objective::kEnergy;
  return cfg;
}

GameConfig lewis_feasible() {
  GameConfig cfg = lewis_benchmark();
  cfg.terminal = {0.0, 0.45};
  return cfg;
}

GameConfig constant_rate() {
  GameConfig cfg = grid_aligned();
  cfg.horizon = 5.0;
  cfg.steps = 5;
  cfg.x0 = 1.0;
  cfg.dynamics = AffineDynamics{0.0, 0.0, -0.2};
  cfg.objective = Objective::kTime;
  return cfg;
}

GameConfig alpha_independent() {
  GameConfig cfg = grid_aligned();
  cfg.dynamics = AffineDynamics{-0.005, 0.0, 0.0};
  return cfg;
}

GameConfig singleton_nature(double alpha) {
  GameConfig cfg = grid_aligned();
  cfg.per_step = {{{40.0, 80.0}, {alpha, alpha}}};
  return cfg;
}

OperatorPolicy worst_policy(const GameConfig& cfg, const EnergySolution& sol) {
  OperatorPolicy p = sol.policy;
  const int n = cfg.steps;
  for (int step = 1; step <= n; ++step)
    for (std::size_t j = 0; j < sol.grids.state.size(); ++j) {
      if (in_terminal(cfg.terminal, sol.grids.state[j])) continue;
      const auto inner = stage_inner(sol.grids.state[j], step, sol.values.slice(n - step), cfg, sol.grids);
      int arg = 0;
      for (std::size_t c = 1; c < inner.size(); ++c)
        if (inner[c].value > inner[static_cast<std::size_t>(arg)].value) arg = static_cast<int>(c);
      p.control[static_cast<std::size_t>(step - 1)][j] = arg;
    }
  return p;
}

}  // namespace drygame::testing
