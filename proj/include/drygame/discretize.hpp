#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace drygame {

/// Uniform humidity grid. nodes().front() == x_min and nodes().back() == x_max exactly.
class StateGrid {
 public:
  StateGrid() = default;

  double x_min() const { return nodes_.front(); }
  double x_max() const { return nodes_.back(); }
  double spacing() const { return spacing_; }
  std::size_t size() const { return nodes_.size(); }
  double operator[](std::size_t i) const { return nodes_[i]; }
  std::span<const double> nodes() const { return nodes_; }

  double clamp(double x) const;
  bool contains(double x) const { return x_min() <= x && x <= x_max(); }

  /// Nearest node; exact midpoints resolve to the lower node.
  std::size_t nearest(double x) const;

  /// Index of the node within kNodeSnap * spacing of x, or size() if none.
  std::size_t snapped(double x) const;

  friend bool operator==(const StateGrid&, const StateGrid&) = default;

 private:
  friend StateGrid build_state_grid(double, double, int);
  std::vector<double> nodes_;
  double spacing_ = 0.0;
};

/// Relative distance (in grid spacings) under which a point is treated as a node.
inline constexpr double kNodeSnap = 1e-9;

StateGrid build_state_grid(double x_min, double x_max, int points);

/// Uniform inclusive sampling of [lo, hi]; {lo} when lo == hi.
std::vector<double> discretize_range(double lo, double hi, int points);

/// Piecewise-linear interpolation of per-node values. +inf at either bracketing
/// node makes the result +inf unless x coincides with the finite node.
double interp_value(std::span<const double> values, const StateGrid& grid, double x);

struct Partition {
  std::vector<double> times;  // tau_0 = 0 < ... < tau_n = J*

  int steps() const { return static_cast<int>(times.size()) - 1; }
  double step_length() const { return times[1] - times[0]; }

  friend bool operator==(const Partition&, const Partition&) = default;
};

Partition uniform_partition(double horizon, int steps);

}  // namespace drygame
