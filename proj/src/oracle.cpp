#include "drygame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "drygame/discretize.hpp"
#include "drygame/errors.hpp"

namespace drygame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tree {
  const GameConfig& cfg;
  std::vector<std::vector<double>> controls;
  std::vector<std::vector<double>> alphas;
  double dt;

  explicit Tree(const GameConfig& c) : cfg(c), dt(c.step_length()) {
    for (int i = 1; i <= cfg.steps; ++i) {
      const auto& r = cfg.ranges(i);
      controls.push_back(discretize_range(r.control.lo, r.control.hi, cfg.control_points));
      alphas.push_back(discretize_range(r.disturbance.lo, r.disturbance.hi, cfg.disturbance_points));
    }
  }

  double next(double x, double t, double a) const {
    const double y = euler_step(cfg.dynamics, x, t, a, dt);
    return std::clamp(y, cfg.state_grid.x_min, cfg.state_grid.x_max);
  }

  // Energy still to pay from humidity x before step `step` is played.
  double energy(double x, int step, double* first = nullptr) const {
    if (in_terminal(cfg.terminal, x)) {
      if (first) *first = controls[0][0];
      return 0.0;
    }
    if (step > cfg.steps) return kInf;
    const auto& ts = controls[static_cast<std::size_t>(step - 1)];
    const auto& qs = alphas[static_cast<std::size_t>(step - 1)];
    double best = kInf;
    if (first) *first = std::numeric_limits<double>::quiet_NaN();
    for (double t : ts) {
      double worst = -kInf;
      for (double a : qs) {
        const double v = dt * eval_energy_rate(cfg.energy, t, a, x) + energy(next(x, t, a), step + 1);
        worst = std::max(worst, v);
      }
      if (worst < best) {
        best = worst;
        if (first) *first = t;
      }
    }
    return best;
  }

  // Steps still needed, n + 1 standing for "never".
  int time(double x, int step) const {
    if (in_terminal(cfg.terminal, x)) return 0;
    if (step > cfg.steps) return cfg.steps + 1;
    int best = cfg.steps + 1;
    for (double t : controls[static_cast<std::size_t>(step - 1)]) {
      int worst = 0;
      for (double a : alphas[static_cast<std::size_t>(step - 1)])
        worst = std::max(worst, 1 + time(next(x, t, a), step + 1));
      best = std::min(best, worst);
    }
    return best;
  }
};

void guard(const GameConfig& cfg, const OracleLimits& limits) {
  const auto rep = validate_config(cfg);
  if (!rep.ok()) throw ConfigError("invalid configuration: " + rep.violations.front());
  const std::uint64_t nodes = oracle_node_count(cfg);
  if (nodes > limits.max_nodes)
    throw InstanceTooLarge("game tree has " +
                           (nodes == std::numeric_limits<std::uint64_t>::max()
                                ? std::string("more than 2^64")
                                : std::to_string(nodes)) +
                           " nodes, limit is " + std::to_string(limits.max_nodes));
}

}  // namespace

std::uint64_t oracle_node_count(const GameConfig& cfg) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t ply = 1;
  for (int i = 1; i <= cfg.steps; ++i) {
    const auto& r = cfg.ranges(i);
    const auto nt = discretize_range(r.control.lo, r.control.hi, cfg.control_points).size();
    const auto nq =
        discretize_range(r.disturbance.lo, r.disturbance.hi, cfg.disturbance_points).size();
    const std::uint64_t branch = nt * nq;
    if (ply > kMax / branch) return kMax;
    ply *= branch;
    if (total > kMax - ply) return kMax;
    total += ply;
  }
  return total;
}

OracleValue brute_force_value(const GameConfig& cfg, const OracleLimits& limits) {
  guard(cfg, limits);
  const Tree tree(cfg);
  OracleValue out;
  out.value = tree.energy(cfg.x0, 1, &out.first_control);
  return out;
}

std::optional<int> brute_force_time(const GameConfig& cfg, const OracleLimits& limits) {
  guard(cfg, limits);
  const Tree tree(cfg);
  const int n = tree.time(cfg.x0, 1);
  if (n > cfg.steps) return std::nullopt;
  return n;
}

}  // namespace drygame
