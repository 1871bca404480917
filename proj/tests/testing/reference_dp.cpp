#include "testing/reference_dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace drygame::testing {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lookup(const std::vector<double>& v, double lo, double h, double x) {
  const double pos = (x - lo) / h;
  const double r = std::round(pos);
  if (std::abs(pos - r) < 1e-9) return v[static_cast<std::size_t>(r)];
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (v[i] == kInf || v[i + 1] == kInf) return kInf;
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * v[i] + w * v[i + 1];
}

}  // namespace

ReferenceDp plain_min_dp(const GameConfig& cfg) {
  const int n = cfg.steps;
  const int m = cfg.state_grid.points;
  const double lo = cfg.state_grid.x_min;
  const double hi = cfg.state_grid.x_max;
  const double h = (hi - lo) / (m - 1);
  const double dt = cfg.horizon / n;
  auto terminal = [&](double x) { return x >= cfg.terminal.lo - 1e-12 && x <= cfg.terminal.hi + 1e-12; };
  auto temps = [&](int step) {
    const auto& r = cfg.ranges(step).control;
    std::vector<double> ts;
    if (r.lo == r.hi) return std::vector<double>{r.lo};
    for (int c = 0; c < cfg.control_points; ++c)
      ts.push_back(r.lo + (r.hi - r.lo) * c / (cfg.control_points - 1));
    ts.back() = r.hi;
    return ts;
  };
  auto best = [&](double x, int step, const std::vector<double>& tail) {
    if (terminal(x)) return 0.0;
    const double alpha = cfg.ranges(step).disturbance.lo;
    double v = kInf;
    for (double t : temps(step)) {
      const double y = std::clamp(x + dt * eval_dynamics(cfg.dynamics, x, t, alpha), lo, hi);
      v = std::min(v, dt * eval_energy_rate(cfg.energy, t, alpha, x) + lookup(tail, lo, h, y));
    }
    return v;
  };

  ReferenceDp out;
  std::vector<double> slice(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) slice[j] = terminal(lo + j * h) ? 0.0 : kInf;
  out.values.push_back(slice);
  for (int k = 1; k <= n; ++k) {
    std::vector<double> next(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) next[j] = best(lo + j * h, n - k + 1, out.values.back());
    out.values.push_back(next);
  }
  out.root = best(cfg.x0, 1, out.values[static_cast<std::size_t>(n - 1)]);
  return out;
}

}  // namespace drygame::testing
