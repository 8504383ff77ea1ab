#include "mfl/core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfl/core/errors.hpp"
#include "mfl/core/stepping.hpp"

namespace mfl {

SpatialGrid SpatialGrid::line(double lower, double upper, int points, bool periodic) {
  return cube(1, lower, upper, points, periodic);
}

SpatialGrid SpatialGrid::cube(int dim, double lower, double upper, int points, bool periodic) {
  SpatialGrid g;
  g.dim = dim;
  g.lower.assign(dim, lower);
  g.upper.assign(dim, upper);
  g.points.assign(dim, points);
  g.periodic = periodic;
  g.validate();
  return g;
}

void SpatialGrid::validate() const {
  if (dim < 1 || dim > 3) throw InvalidArgument("grid dimension must be 1, 2 or 3");
  if ((int)lower.size() != dim || (int)upper.size() != dim || (int)points.size() != dim)
    throw InvalidArgument("grid axis arrays do not match the dimension");
  for (int a = 0; a < dim; ++a) {
    if (points[a] < 16)
      throw InvalidArgument("grid needs at least 16 points per axis, got " + std::to_string(points[a]));
    if (!(upper[a] > lower[a]) || !std::isfinite(upper[a]) || !std::isfinite(lower[a]))
      throw InvalidArgument("grid extent must be positive and finite");
  }
}

double SpatialGrid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= spacing(a);
  return v;
}

std::size_t SpatialGrid::size() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(points[a]);
  return n;
}

std::vector<double> SpatialGrid::axis_nodes(int axis) const {
  std::vector<double> x(points[axis]);
  for (int k = 0; k < points[axis]; ++k) x[k] = coordinate(axis, k);
  return x;
}

void SpatialGrid::node(std::size_t flat, double* out) const {
  for (int a = dim - 1; a >= 0; --a) {
    const std::size_t n = static_cast<std::size_t>(points[a]);
    out[a] = coordinate(a, static_cast<int>(flat % n));
    flat /= n;
  }
}

bool SpatialGrid::power_of_two() const {
  for (int a = 0; a < dim; ++a)
    if (!is_power_of_two(points[a])) return false;
  return true;
}

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

int uniform_steps(double t, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("final time must be nonnegative");
  if (t == 0.0) return 0;
  // Tolerate t/dt landing a hair above an integer.
  return std::max(1, static_cast<int>(std::ceil(t / dt - 1e-9)));
}

long next_power_of_two(long n) {
  long p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace mfl
