#include "drygame/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "drygame/errors.hpp"

namespace drygame {

namespace {

void require_valid(const GameConfig& cfg) {
  const auto rep = validate_config(cfg);
  if (rep.ok()) return;
  std::string msg = "invalid configuration:";
  for (const auto& v : rep.violations) msg += "\n  " + v;
  throw ConfigError(msg);
}

// Runs body(begin, end) over contiguous node blocks. Every node is written by
// exactly one block, so the result does not depend on the thread count.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([=] { body(begin, end); });
  }
}

// Guaranteed steps at an off-grid point: the worse of the two bracketing nodes.
int time_lookup(std::span<const int> slice, const StateGrid& grid, double y) {
  if (const std::size_t j = grid.snapped(y); j < grid.size()) return slice[j];
  const double pos = (y - grid.x_min()) / grid.spacing();
  const std::size_t lo = std::min(static_cast<std::size_t>(pos), grid.size() - 2);
  return std::max(slice[lo], slice[lo + 1]);
}

struct TimeChoice {
  int steps = kUnreachable;
  int control = kNoControl;
};

TimeChoice time_stage(double x, int step, std::span<const int> tail, const GameConfig& cfg,
                      const Grids& grids) {
  if (in_terminal(cfg.terminal, x)) return {0, 0};
  TimeChoice best;
  const auto controls = grids.control_grid(step);
  const auto alphas = grids.disturbance_grid(step);
  for (std::size_t c = 0; c < controls.size(); ++c) {
    int worst = -1;
    for (double a : alphas) {
      const int n = time_lookup(tail, grids.state, clamped_image(cfg, grids, x, controls[c], a));
      worst = std::max(worst, n);
    }
    const int total = worst == kUnreachable ? kUnreachable : worst + 1;
    if (total < best.steps) best = {total, static_cast<int>(c)};
  }
  return best;
}

}  // namespace

Grids build_grids(const GameConfig& cfg) {
  Grids g;
  g.state = build_state_grid(cfg.state_grid.x_min, cfg.state_grid.x_max, cfg.state_grid.points);
  g.partition = uniform_partition(cfg.horizon, cfg.steps);
  if (cfg.per_step.empty()) throw InvalidRange("per_step holds no ranges");
  g.controls.reserve(static_cast<std::size_t>(cfg.steps));
  g.disturbances.reserve(static_cast<std::size_t>(cfg.steps));
  for (int i = 1; i <= cfg.steps; ++i) {
    const auto& r = cfg.ranges(i);
    g.controls.push_back(discretize_range(r.control.lo, r.control.hi, cfg.control_points));
    g.disturbances.push_back(
        discretize_range(r.disturbance.lo, r.disturbance.hi, cfg.disturbance_points));
  }
  return g;
}

double OperatorPolicy::temperature(int step, std::size_t node) const {
  const int c = index(step, node);
  if (c == kNoControl) return std::numeric_limits<double>::quiet_NaN();
  return grids.controls[step - 1][static_cast<std::size_t>(c)];
}

double clamped_image(const GameConfig& cfg, const Grids& grids, double x, double t, double alpha) {
  return grids.state.clamp(euler_step(cfg.dynamics, x, t, alpha, grids.step_length()));
}

std::vector<InnerMax> stage_inner(double x, int step, std::span<const double> tail,
                                  const GameConfig& cfg, const Grids& grids) {
  const auto controls = grids.control_grid(step);
  const auto alphas = grids.disturbance_grid(step);
  const double dt = grids.step_length();
  std::vector<InnerMax> out(controls.size());
  for (std::size_t c = 0; c < controls.size(); ++c) {
    InnerMax& m = out[c];
    for (std::size_t d = 0; d < alphas.size(); ++d) {
      const double stage = dt * eval_energy_rate(cfg.energy, controls[c], alphas[d], x);
      const double v =
          stage + interp_value(tail, grids.state, clamped_image(cfg, grids, x, controls[c], alphas[d]));
      if (v > m.value) m = {v, static_cast<int>(d)};
    }
  }
  return out;
}

StageChoice stage_minmax(double x, int step, std::span<const double> tail, const GameConfig& cfg,
                         const Grids& grids) {
  const auto controls = grids.control_grid(step);
  const auto alphas = grids.disturbance_grid(step);
  if (in_terminal(cfg.terminal, x)) return {0.0, 0, 0, controls[0], alphas[0]};

  const auto inner = stage_inner(x, step, tail, cfg, grids);
  StageChoice best;
  for (std::size_t c = 0; c < inner.size(); ++c) {
    if (inner[c].value < best.value) {
      best.value = inner[c].value;
      best.control = static_cast<int>(c);
      best.disturbance = inner[c].disturbance;
    }
  }
  if (best.control != kNoControl) {
    best.temperature = controls[static_cast<std::size_t>(best.control)];
    best.alpha = alphas[static_cast<std::size_t>(best.disturbance)];
  }
  return best;
}

EnergySolution solve_energy_unchecked(const GameConfig& cfg, const SolveOptions& opts) {
  require_valid(cfg);
  EnergySolution sol;
  sol.grids = build_grids(cfg);
  const Grids& g = sol.grids;
  const int n = cfg.steps;
  const std::size_t nodes = g.state.size();

  sol.values.slices.assign(static_cast<std::size_t>(n) + 1, std::vector<double>(nodes));
  for (std::size_t j = 0; j < nodes; ++j)
    sol.values.slices[0][j] = in_terminal(cfg.terminal, g.state[j]) ? 0.0 : kInfeasible;

  sol.policy.grids = g;
  sol.policy.control.assign(static_cast<std::size_t>(n), std::vector<int>(nodes, kNoControl));
  sol.responder.grids = g;
  sol.responder.disturbance.resize(static_cast<std::size_t>(n));

  for (int k = 1; k <= n; ++k) {
    const int step = n - k + 1;
    const auto tail = sol.values.slice(k - 1);
    auto& out = sol.values.slices[static_cast<std::size_t>(k)];
    auto& pol = sol.policy.control[static_cast<std::size_t>(step - 1)];
    auto& resp = sol.responder.disturbance[static_cast<std::size_t>(step - 1)];
    resp.assign(nodes, std::vector<int>(g.control_grid(step).size(), 0));

    parallel_for(nodes, opts.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t j = begin; j < end; ++j) {
        const double x = g.state[j];
        if (in_terminal(cfg.terminal, x)) {
          out[j] = 0.0;
          pol[j] = 0;
          continue;  // responder entries stay at index 0
        }
        const auto inner = stage_inner(x, step, tail, cfg, g);
        double best = kInfeasible;
        int arg = kNoControl;
        for (std::size_t c = 0; c < inner.size(); ++c) {
          resp[j][c] = inner[c].disturbance;
          if (inner[c].value < best) {
            best = inner[c].value;
            arg = static_cast<int>(c);
          }
        }
        out[j] = best;
        pol[j] = arg;
      }
    });
  }

  sol.root = stage_minmax(cfg.x0, 1, sol.values.slice(n - 1), cfg, g);
  return sol;
}

EnergySolution solve_energy(const GameConfig& cfg, const SolveOptions& opts) {
  auto sol = solve_energy_unchecked(cfg, opts);
  if (std::isinf(sol.root.value))
    throw NotReachable(
        "the terminal set cannot be guaranteed from x0 within the horizon: the standing "
        "assumption that every admissible play reaches the terminal set is violated");
  return sol;
}

StageChoice energy_value_at(const GameConfig& cfg, const EnergySolution& sol, double x0) {
  if (!sol.grids.state.contains(x0)) throw OutOfDomain("initial humidity outside the state grid");
  return stage_minmax(x0, 1, sol.values.slice(cfg.steps - 1), cfg, sol.grids);
}

TimeSolution solve_time_unchecked(const GameConfig& cfg, const SolveOptions& opts) {
  require_valid(cfg);
  TimeSolution sol;
  sol.grids = build_grids(cfg);
  const Grids& g = sol.grids;
  const int n = cfg.steps;
  const std::size_t nodes = g.state.size();

  sol.slices.assign(static_cast<std::size_t>(n) + 1, std::vector<int>(nodes, kUnreachable));
  for (std::size_t j = 0; j < nodes; ++j)
    if (in_terminal(cfg.terminal, g.state[j])) sol.slices[0][j] = 0;
  sol.policy.grids = g;
  sol.policy.control.assign(static_cast<std::size_t>(n), std::vector<int>(nodes, kNoControl));

  for (int k = 1; k <= n; ++k) {
    const int step = n - k + 1;
    auto& out = sol.slices[static_cast<std::size_t>(k)];
    auto& pol = sol.policy.control[static_cast<std::size_t>(step - 1)];
    if (sol.converged_at != -1) {
      // Past the fixpoint every further iterate and argmin repeats; step
      // ranges that vary per step still need their own argmin though.
      if (cfg.per_step.size() == 1) {
        out = sol.slices[static_cast<std::size_t>(k - 1)];
        pol = sol.policy.control[static_cast<std::size_t>(step)];
        continue;
      }
    }
    const std::span<const int> tail = sol.slices[static_cast<std::size_t>(k - 1)];
    parallel_for(nodes, opts.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t j = begin; j < end; ++j) {
        const auto choice = time_stage(g.state[j], step, tail, cfg, g);
        out[j] = choice.steps;
        pol[j] = choice.control;
      }
    });
    if (sol.converged_at == -1 && out == sol.slices[static_cast<std::size_t>(k - 1)])
      sol.converged_at = k;
  }

  const auto root = time_stage(cfg.x0, 1, sol.slices[static_cast<std::size_t>(n - 1)], cfg, g);
  sol.root_steps = root.steps;
  sol.root_control = root.control;
  return sol;
}

TimeSolution solve_time(const GameConfig& cfg, const SolveOptions& opts) {
  auto sol = solve_time_unchecked(cfg, opts);
  if (sol.root_steps == kUnreachable)
    throw NotReachable(
        "the terminal set cannot be reached from x0 within the horizon under every "
        "disturbance: the standing reachability assumption is violated");
  return sol;
}

int time_value_at(const GameConfig& cfg, const TimeSolution& sol, double x0, int* control) {
  if (!sol.grids.state.contains(x0)) throw OutOfDomain("initial humidity outside the state grid");
  const auto c = time_stage(x0, 1, sol.slices[static_cast<std::size_t>(cfg.steps - 1)], cfg, sol.grids);
  if (control) *control = c.control;
  return c.steps;
}

GameConfig refined_config(const GameConfig& cfg, int level) {
  GameConfig out = cfg;
  const int factor = 1 << level;
  out.steps = cfg.steps * factor;
  out.state_grid.points = (cfg.state_grid.points - 1) * factor + 1;
  if (cfg.per_step.size() > 1) {
    out.per_step.clear();
    for (const auto& r : cfg.per_step)
      for (int s = 0; s < factor; ++s) out.per_step.push_back(r);
  }
  return out;
}

std::vector<RefineLevel> refine_and_solve(const GameConfig& cfg, int levels,
                                          const SolveOptions& opts) {
  if (levels < 2) throw InvalidRange("refinement needs at least 2 levels");
  std::vector<RefineLevel> out;
  for (int level = 0; level < levels; ++level) {
    const GameConfig lc = refined_config(cfg, level);
    const auto sol = solve_energy(lc, opts);
    RefineLevel r;
    r.steps = lc.steps;
    r.dt = sol.grids.step_length();
    r.dx = sol.grids.state.spacing();
    r.value = sol.value();
    if (!out.empty()) r.diff_from_prev = std::abs(r.value - out.back().value);
    out.push_back(r);
  }
  return out;
}

InterpolationBound interpolation_bound(const GameConfig& cfg, const EnergySolution& sol) {
  InterpolationBound b;
  const auto& grid = sol.grids.state;
  b.dx = grid.spacing();
  b.dynamics_lipschitz = dynamics_lipschitz(cfg);
  for (int k = 0; k < cfg.steps; ++k) {
    const auto s = sol.values.slice(k);
    double lip = 0.0;
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
      if (std::isinf(s[j]) || std::isinf(s[j + 1])) continue;
      lip = std::max(lip, std::abs(s[j + 1] - s[j]) / b.dx);
    }
    b.slice_lipschitz.push_back(lip);
    b.coefficient += lip;
  }
  b.bound = b.coefficient * b.dx;
  return b;
}

bool is_grid_aligned(const GameConfig& cfg, const Grids& grids) {
  for (int step = 1; step <= grids.steps(); ++step)
    for (std::size_t j = 0; j < grids.state.size(); ++j) {
      const double x = grids.state[j];
      if (in_terminal(cfg.terminal, x)) continue;
      for (double t : grids.control_grid(step))
        for (double a : grids.disturbance_grid(step))
          if (grids.state.snapped(clamped_image(cfg, grids, x, t, a)) == grids.state.size())
            return false;
    }
  return std::abs(cfg.x0 - grids.state[grids.state.nearest(cfg.x0)]) <=
         kNodeSnap * grids.state.spacing();
}

}  // namespace drygame
