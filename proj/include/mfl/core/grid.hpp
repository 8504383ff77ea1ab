#pragma once

#include <cstddef>
#include <vector>

namespace mfl {

/// Uniform tensor grid. Node k on axis a sits at lower[a] + k * spacing(a) with
/// spacing (upper - lower) / points, so a periodic axis does not repeat its
/// first node.
struct SpatialGrid {
  int dim = 1;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<int> points;
  bool periodic = false;

  static SpatialGrid line(double lower, double upper, int points, bool periodic);
  /// Same box on every axis.
  static SpatialGrid cube(int dim, double lower, double upper, int points, bool periodic);

  void validate() const;
  double spacing(int axis) const { return (upper[axis] - lower[axis]) / points[axis]; }
  double extent(int axis) const { return upper[axis] - lower[axis]; }
  double cell_volume() const;
  std::size_t size() const;
  double coordinate(int axis, int index) const { return lower[axis] + index * spacing(axis); }
  std::vector<double> axis_nodes(int axis) const;
  /// Coordinates of flat node `flat` (axis 0 slowest).
  void node(std::size_t flat, double* out) const;
  bool power_of_two() const;
};

bool is_power_of_two(long n);
long next_power_of_two(long n);

}  // namespace mfl
