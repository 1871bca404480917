#pragma once

// Backward-induction min-max dynamic programming over the humidity grid.
//
// Steps are numbered forward in time, i = 1..n; a value slice is indexed by
// steps-to-go k = n - i + 1. The operator picks a temperature from the step's
// control grid first, nature answers with a disturbance knowing that choice,
// and the stage energy dt * e(t, alpha, x) is added to the interpolated tail
// value at the clamped Euler image. The terminal set is absorbing.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "drygame/discretize.hpp"
#include "drygame/model.hpp"

namespace drygame {

inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();
inline constexpr int kNoControl = -1;
inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// All finite sets the game is played on.
struct Grids {
  StateGrid state;
  Partition partition;
  std::vector<std::vector<double>> controls;      // [i-1], ascending
  std::vector<std::vector<double>> disturbances;  // [i-1], ascending

  int steps() const { return partition.steps(); }
  double step_length() const { return partition.step_length(); }
  std::span<const double> control_grid(int step) const { return controls[step - 1]; }
  std::span<const double> disturbance_grid(int step) const { return disturbances[step - 1]; }

  friend bool operator==(const Grids&, const Grids&) = default;
};

/// Throws InvalidRange on degenerate inputs; does not run validate_config.
Grids build_grids(const GameConfig& cfg);

/// F_k(x) for k = 0..n on every state node; +inf marks infeasible nodes.
struct ValueTable {
  std::vector<std::vector<double>> slices;

  int steps() const { return static_cast<int>(slices.size()) - 1; }
  std::span<const double> slice(int k) const { return slices[k]; }
};

/// Feedback map (step, state node) -> temperature, stored as control-grid indices.
struct OperatorPolicy {
  Grids grids;
  std::vector<std::vector<int>> control;  // [i-1][node], kNoControl where infeasible

  int index(int step, std::size_t node) const { return control[step - 1][node]; }
  /// NaN for infeasible nodes.
  double temperature(int step, std::size_t node) const;
};

/// Nature's per-stage maximizer for every (step, node, control-grid temperature).
struct NatureResponder {
  Grids grids;
  std::vector<std::vector<std::vector<int>>> disturbance;  // [i-1][node][control]

  int index(int step, std::size_t node, int control) const {
    return disturbance[step - 1][node][static_cast<std::size_t>(control)];
  }
  double alpha(int step, std::size_t node, int control) const {
    return grids.disturbances[step - 1][static_cast<std::size_t>(index(step, node, control))];
  }
};

struct StageChoice {
  double value = kInfeasible;
  int control = kNoControl;
  int disturbance = 0;
  double temperature = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();
};

/// Inner maximum over disturbances for one fixed control.
struct InnerMax {
  double value = -kInfeasible;
  int disturbance = 0;
};

/// Image of x under one Euler step, clamped to the state grid.
double clamped_image(const GameConfig& cfg, const Grids& grids, double x, double t, double alpha);

/// Nature's answer to every control at (x, step). Lowest index wins ties.
std::vector<InnerMax> stage_inner(double x, int step, std::span<const double> tail,
                                  const GameConfig& cfg, const Grids& grids);

/// min over controls of max over disturbances of dt*e + tail(image).
/// Absorbing on the terminal set: returns value 0 with the first grid entries.
StageChoice stage_minmax(double x, int step, std::span<const double> tail, const GameConfig& cfg,
                         const Grids& grids);

struct SolveOptions {
  unsigned threads = 1;
};

struct EnergySolution {
  Grids grids;
  ValueTable values;
  OperatorPolicy policy;
  NatureResponder responder;
  StageChoice root;  // evaluated directly at x0 with n steps to go

  double value() const { return root.value; }
};

/// Throws ConfigError on an invalid instance, NotReachable if F_n(x0) is +inf.
EnergySolution solve_energy(const GameConfig& cfg, const SolveOptions& opts = {});

/// Same as solve_energy but returns infeasible roots instead of throwing.
EnergySolution solve_energy_unchecked(const GameConfig& cfg, const SolveOptions& opts = {});

/// Root evaluation at an arbitrary initial humidity, reusing a finished table.
StageChoice energy_value_at(const GameConfig& cfg, const EnergySolution& sol, double x0);

struct TimeSolution {
  Grids grids;
  /// N_k on every node for k = 0..n; kUnreachable is the sentinel.
  std::vector<std::vector<int>> slices;
  OperatorPolicy policy;
  int converged_at = -1;  // first k with N_k == N_{k-1}, -1 if never
  int root_steps = kUnreachable;
  int root_control = kNoControl;

  std::span<const int> table() const { return slices.back(); }
};

/// Minimum guaranteed number of steps to reach the terminal set.
/// Throws ConfigError on an invalid instance, NotReachable if N(x0) is the sentinel.
TimeSolution solve_time(const GameConfig& cfg, const SolveOptions& opts = {});
TimeSolution solve_time_unchecked(const GameConfig& cfg, const SolveOptions& opts = {});

/// Guaranteed hitting steps from an arbitrary initial humidity.
int time_value_at(const GameConfig& cfg, const TimeSolution& sol, double x0, int* control = nullptr);

/// Config for refinement level `level`: steps * 2^level, grid spacing / 2^level.
GameConfig refined_config(const GameConfig& cfg, int level);

struct RefineLevel {
  int steps = 0;
  double dt = 0.0;
  double dx = 0.0;
  double value = kInfeasible;
  double diff_from_prev = std::numeric_limits<double>::quiet_NaN();
};

/// Solves levels 0..levels-1. Throws InvalidRange if levels < 2, NotReachable per level.
std::vector<RefineLevel> refine_and_solve(const GameConfig& cfg, int levels,
                                          const SolveOptions& opts = {});

/// Interpolation error estimate of a finished energy solve: the empirical
/// Lipschitz constant of every tail slice times the grid spacing, summed over
/// the slices that get interpolated. Jumps at the terminal boundary enter as
/// their full height.
struct InterpolationBound {
  double dx = 0.0;
  double dynamics_lipschitz = 0.0;
  std::vector<double> slice_lipschitz;  // k = 0..n-1
  double coefficient = 0.0;             // C, so that the bound is C * dx
  double bound = 0.0;
};

InterpolationBound interpolation_bound(const GameConfig& cfg, const EnergySolution& sol);

/// True when every Euler image of every non-terminal node lands on a node.
bool is_grid_aligned(const GameConfig& cfg, const Grids& grids);

}  // namespace drygame
