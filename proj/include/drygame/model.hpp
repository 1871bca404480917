#pragma once

// Physical description of the drying game: humidity dynamics, energy
// consumption rate, terminal humidity set and the admissible ranges of the
// operator's temperature and nature's disturbance on every step.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace drygame {

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return lo <= v && v <= hi; }
  double width() const { return hi - lo; }
};

/// x' = a*t + b*alpha + c. Exists mainly so that tests can build instances
/// whose Euler images land exactly on grid nodes.
struct AffineDynamics {
  double a = 0.0;  // rate per degree
  double b = 0.0;  // rate per unit disturbance
  double c = 0.0;  // constant rate
};

/// Thin-layer drying law x' = -k(t) (x - alpha), k(t) = k_ref exp(beta (t - t_ref)).
/// The disturbance alpha is the equilibrium moisture content.
struct LewisDynamics {
  double k_ref = 0.0;
  double beta = 0.0;
  double t_ref = 0.0;

  double rate_constant(double t) const;
};

using DryingDynamics = std::variant<AffineDynamics, LewisDynamics>;

/// Heater power e = c0 + c1 * max(t - t_amb, 0).
struct EnergyModel {
  double c0 = 0.0;
  double c1 = 0.0;
  double t_amb = 0.0;
};

/// Target humidity interval. Membership is boundary inclusive.
struct TerminalSet {
  double lo = 0.0;
  double hi = 0.0;
};

/// Per-step admissible sets T_i (temperature, degrees C) and Q_i (disturbance).
struct StepRanges {
  Interval control;
  Interval disturbance;
};

struct StateGridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  int points = 2;
};

enum class Objective { kEnergy, kTime };

/// A complete problem instance.
struct GameConfig {
  double horizon = 1.0;  // J*
  int steps = 1;         // n, step length is horizon / steps
  double x0 = 0.0;
  StateGridSpec state_grid;
  /// Either one entry (applies to every step) or exactly `steps` entries.
  std::vector<StepRanges> per_step;
  int control_points = 2;
  int disturbance_points = 2;
  DryingDynamics dynamics = AffineDynamics{};
  EnergyModel energy;
  TerminalSet terminal;
  Objective objective = Objective::kEnergy;

  double step_length() const { return horizon / static_cast<double>(steps); }

  /// Ranges for 1-based step i.
  const StepRanges& ranges(int step) const;
};

/// Slack used by terminal membership so that accumulated round-off in a
/// sum of grid-aligned increments does not push a state off the boundary.
inline constexpr double kTerminalSlack = 1e-12;

double eval_dynamics(const DryingDynamics& dyn, double x, double t, double alpha);

/// Unclamped explicit Euler update x + dt * f(x, t, alpha).
double euler_step(const DryingDynamics& dyn, double x, double t, double alpha, double dt);

double eval_energy_rate(const EnergyModel& en, double t, double alpha, double x);

bool in_terminal(const TerminalSet& ts, double x);

/// Upper bound of |df/dx| over the admissible temperatures of the instance.
double dynamics_lipschitz(const GameConfig& cfg);

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
};

/// Checks every structural invariant of the instance. Never throws.
ValidationReport validate_config(const GameConfig& cfg);

const char* to_string(Objective obj);

}  // namespace drygame
