#include "drygame/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace drygame {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool finite(double v) { return std::isfinite(v); }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

double LewisDynamics::rate_constant(double t) const {
  return k_ref * std::exp(beta * (t - t_ref));
}

const StepRanges& GameConfig::ranges(int step) const {
  if (per_step.size() == 1) return per_step.front();
  return per_step.at(static_cast<std::size_t>(step - 1));
}

double eval_dynamics(const DryingDynamics& dyn, double x, double t, double alpha) {
  return std::visit(Overloaded{
                        [&](const AffineDynamics& d) { return d.a * t + d.b * alpha + d.c; },
                        [&](const LewisDynamics& d) { return -d.rate_constant(t) * (x - alpha); },
                    },
                    dyn);
}

double euler_step(const DryingDynamics& dyn, double x, double t, double alpha, double dt) {
  return x + dt * eval_dynamics(dyn, x, t, alpha);
}

double eval_energy_rate(const EnergyModel& en, double t, double /*alpha*/, double /*x*/) {
  return en.c0 + en.c1 * std::max(t - en.t_amb, 0.0);
}

bool in_terminal(const TerminalSet& ts, double x) {
  return ts.lo - kTerminalSlack <= x && x <= ts.hi + kTerminalSlack;
}

double dynamics_lipschitz(const GameConfig& cfg) {
  return std::visit(Overloaded{
                        [](const AffineDynamics&) { return 0.0; },
                        [&](const LewisDynamics& d) {
                          double k = 0.0;
                          for (int i = 1; i <= std::max(cfg.steps, 1); ++i) {
                            if (cfg.per_step.empty()) break;
                            const auto& r = cfg.ranges(i);
                            k = std::max({k, d.rate_constant(r.control.lo),
                                          d.rate_constant(r.control.hi)});
                          }
                          return k;
                        },
                    },
                    cfg.dynamics);
}

const char* to_string(Objective obj) {
  return obj == Objective::kEnergy ? "energy" : "time";
}

ValidationReport validate_config(const GameConfig& cfg) {
  ValidationReport rep;
  auto fail = [&](std::string msg) { rep.violations.push_back(std::move(msg)); };
  auto warn = [&](std::string msg) { rep.warnings.push_back(std::move(msg)); };

  if (cfg.steps < 1) fail("steps must be ≥ 1");
  if (!finite(cfg.horizon) || cfg.horizon <= 0.0) fail("horizon must be > 0");

  const auto& g = cfg.state_grid;
  if (g.points < 2) fail("state_grid.points must be ≥ 2");
  if (!finite(g.x_min) || !finite(g.x_max) || g.x_min >= g.x_max)
    fail("state_grid requires x_min < x_max");
  if (g.x_min < 0.0) fail("state_grid.x_min must be ≥ 0 (humidity is nonnegative)");
  if (!finite(cfg.x0) || cfg.x0 < g.x_min || cfg.x0 > g.x_max)
    fail("x0 must lie in [x_min, x_max]");

  const auto& ts = cfg.terminal;
  if (!(ts.lo <= ts.hi)) fail("terminal: lo ≤ hi required");
  if (ts.lo < 0.0) fail("terminal: lo must be ≥ 0");
  if (ts.lo < g.x_min || ts.hi > g.x_max) fail("terminal set must lie within [x_min, x_max]");

  if (cfg.control_points < 1) fail("control_points must be ≥ 1");
  if (cfg.disturbance_points < 1) fail("disturbance_points must be ≥ 1");

  bool ranges_ok = true;
  if (cfg.per_step.empty()) {
    fail("per_step must hold at least one entry");
    ranges_ok = false;
  } else if (cfg.per_step.size() != 1 && cfg.steps >= 1 &&
             cfg.per_step.size() != static_cast<std::size_t>(cfg.steps)) {
    fail("per_step must hold 1 entry or exactly `steps` entries");
    ranges_ok = false;
  }
  for (std::size_t i = 0; i < cfg.per_step.size(); ++i) {
    const auto& r = cfg.per_step[i];
    const std::string where = "per_step[" + std::to_string(i) + "]";
    if (!finite(r.control.lo) || !finite(r.control.hi) || r.control.lo > r.control.hi) {
      fail(where + ".control: t1 ≤ t2 required");
      ranges_ok = false;
    } else if (r.control.lo < r.control.hi && cfg.control_points < 2) {
      fail(where + ".control: a nondegenerate interval needs control_points ≥ 2");
    }
    if (!finite(r.disturbance.lo) || !finite(r.disturbance.hi) ||
        r.disturbance.lo > r.disturbance.hi) {
      fail(where + ".disturbance: alpha1 ≤ alpha2 required");
      ranges_ok = false;
    } else if (r.disturbance.lo < r.disturbance.hi && cfg.disturbance_points < 2) {
      fail(where + ".disturbance: a nondegenerate interval needs disturbance_points ≥ 2");
    }
  }

  if (cfg.energy.c0 < 0.0 || !finite(cfg.energy.c0)) fail("energy.c0 must be ≥ 0");
  if (cfg.energy.c1 < 0.0 || !finite(cfg.energy.c1)) fail("energy.c1 must be ≥ 0");
  if (!finite(cfg.energy.t_amb)) fail("energy.t_amb must be finite");

  if (const auto* lw = std::get_if<LewisDynamics>(&cfg.dynamics)) {
    if (!(lw->k_ref > 0.0) || !finite(lw->k_ref)) fail("lewis: k_ref must be > 0");
    if (!finite(lw->beta) || !finite(lw->t_ref)) fail("lewis: beta and t_ref must be finite");
  } else if (const auto* af = std::get_if<AffineDynamics>(&cfg.dynamics)) {
    if (!finite(af->a) || !finite(af->b) || !finite(af->c))
      fail("affine: a, b, c must be finite");
    if (af->a == 0.0 && af->b == 0.0 && af->c == 0.0) warn("state frozen: affine a = b = c = 0");
  }

  if (!rep.ok() || !ranges_ok) return rep;

  // Coarse hull of humidities any play can visit, used only for warnings.
  double reach_lo = cfg.x0;
  double reach_hi = cfg.x0;
  double alpha_floor_min = g.x_max;  // smallest per-step upper disturbance
  for (int i = 1; i <= cfg.steps; ++i) {
    const auto& r = cfg.ranges(i);
    alpha_floor_min = std::min(alpha_floor_min, r.disturbance.hi);
  }
  const double dt = cfg.step_length();
  if (const auto* af = std::get_if<AffineDynamics>(&cfg.dynamics)) {
    double rmin = 0.0;
    double rmax = 0.0;
    for (int i = 1; i <= cfg.steps; ++i) {
      const auto& r = cfg.ranges(i);
      for (double t : {r.control.lo, r.control.hi})
        for (double a : {r.disturbance.lo, r.disturbance.hi}) {
          const double v = af->a * t + af->b * a + af->c;
          rmin = std::min(rmin, v);
          rmax = std::max(rmax, v);
        }
    }
    reach_lo = cfg.x0 + cfg.horizon * rmin;
    reach_hi = cfg.x0 + cfg.horizon * rmax;
  } else {
    const bool overshoot = dynamics_lipschitz(cfg) * dt > 1.0;
    for (int i = 1; i <= cfg.steps; ++i) {
      const auto& r = cfg.ranges(i);
      reach_lo = std::min(reach_lo, r.disturbance.lo);
      reach_hi = std::max(reach_hi, r.disturbance.hi);
    }
    if (overshoot) {
      reach_lo = g.x_min;
      reach_hi = g.x_max;
    } else if (cfg.x0 > ts.hi && alpha_floor_min > ts.hi) {
      warn("nature can hold humidity above the terminal set: equilibrium moisture " +
           fmt(alpha_floor_min) + " exceeds terminal hi " + fmt(ts.hi) + " on every step");
    }
  }
  reach_lo = std::clamp(reach_lo, g.x_min, g.x_max);
  reach_hi = std::clamp(reach_hi, g.x_min, g.x_max);
  if (ts.hi < reach_lo || ts.lo > reach_hi)
    warn("terminal set does not intersect the reachable humidity range [" + fmt(reach_lo) +
         ", " + fmt(reach_hi) + "]");
  return rep;
}

}  // namespace drygame
