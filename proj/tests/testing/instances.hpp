#pragma once

#include "drygame/model.hpp"
#include "drygame/solver.hpp"

namespace drygame::testing {

/// n = 3, |T| = |Q| = 3, 11-node grid on [0, 1], affine dynamics with every
/// Euler image on a node. Rates a*t + b*alpha in {-0.4, ..., 0}.
GameConfig grid_aligned();

/// Thin-layer benchmark exactly as specified for the convergence study
/// (terminal set [0, 0.15], disturbance range [0.05, 0.25]).
GameConfig lewis_benchmark();

/// lewis_benchmark with the terminal set widened to [0, 0.45]. Above every
/// equilibrium moisture nature can impose, and wide enough that nodes just
/// outside it move by at least one cell per step at every refinement level.
GameConfig lewis_feasible();

/// x' = -0.2, dt = 1, x0 = 1, terminal [0, 0.2], 5 steps.
GameConfig constant_rate();

/// grid_aligned with b = 0: nature cannot influence dynamics or energy.
GameConfig alpha_independent();

/// grid_aligned with a singleton disturbance interval.
GameConfig singleton_nature(double alpha);

/// The solved policy with every non-terminal entry replaced by the control
/// whose stage maximum is largest.
OperatorPolicy worst_policy(const GameConfig& cfg, const EnergySolution& sol);

}  // namespace drygame::testing
