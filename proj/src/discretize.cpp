#include "drygame/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "drygame/errors.hpp"

namespace drygame {

StateGrid build_state_grid(double x_min, double x_max, int points) {
  if (!(x_min < x_max) || points < 2)
    throw InvalidRange("state grid needs x_min < x_max and at least 2 points");
  StateGrid g;
  g.nodes_ = discretize_range(x_min, x_max, points);
  g.spacing_ = (x_max - x_min) / static_cast<double>(points - 1);
  return g;
}

double StateGrid::clamp(double x) const { return std::clamp(x, x_min(), x_max()); }

std::size_t StateGrid::nearest(double x) const {
  const double xc = clamp(x);
  const double pos = (xc - x_min()) / spacing_;
  auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo >= size() - 1) return size() - 1;
  // Distances in x rather than pos so that ties are judged on actual nodes.
  const double dlo = xc - nodes_[lo];
  const double dhi = nodes_[lo + 1] - xc;
  return dhi < dlo ? lo + 1 : lo;
}

std::size_t StateGrid::snapped(double x) const {
  const std::size_t j = nearest(x);
  return std::abs(x - nodes_[j]) <= kNodeSnap * spacing_ ? j : size();
}

std::vector<double> discretize_range(double lo, double hi, int points) {
  if (!(lo <= hi)) throw InvalidRange("range requires lo ≤ hi");
  if (lo == hi) return {lo};
  if (points < 2) throw InvalidRange("a nondegenerate range needs at least 2 points");
  std::vector<double> out(static_cast<std::size_t>(points));
  const double width = hi - lo;
  const double last = static_cast<double>(points - 1);
  for (int i = 0; i < points; ++i) out[i] = lo + width * (static_cast<double>(i) / last);
  out.back() = hi;
  return out;
}

double interp_value(std::span<const double> values, const StateGrid& grid, double x) {
  if (values.size() != grid.size())
    throw OutOfDomain("value slice length does not match the state grid");
  if (!grid.contains(x))
    throw OutOfDomain("interpolation point " + std::to_string(x) + " outside the state grid");
  if (const std::size_t j = grid.snapped(x); j < grid.size()) return values[j];

  const double pos = (x - grid.x_min()) / grid.spacing();
  std::size_t lo = std::min(static_cast<std::size_t>(pos), grid.size() - 2);
  const double v0 = values[lo];
  const double v1 = values[lo + 1];
  if (std::isinf(v0) || std::isinf(v1)) return std::numeric_limits<double>::infinity();
  const double w = (x - grid[lo]) / (grid[lo + 1] - grid[lo]);
  return v0 + w * (v1 - v0);
}

Partition uniform_partition(double horizon, int steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon) || steps < 1)
    throw InvalidRange("partition needs J* > 0 and n ≥ 1");
  Partition p;
  p.times.resize(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i)
    p.times[i] = horizon * (static_cast<double>(i) / static_cast<double>(steps));
  p.times.back() = horizon;
  return p;
}

}  // namespace drygame
