#include "mfl/classical/ensemble.hpp"

#include <cmath>
#include <string>

#include "mfl/core/errors.hpp"

namespace mfl::classical {

EnsembleState EnsembleState::uniform(int n, int dim) {
  if (n < 1) throw InvalidArgument("ensemble needs at least one particle");
  if (dim < 1 || dim > 3) throw InvalidArgument("ensemble dimension must be 1, 2 or 3");
  EnsembleState s;
  s.count = n;
  s.dim = dim;
  s.positions.assign(static_cast<size_t>(n) * dim, 0.0);
  s.velocities.assign(static_cast<size_t>(n) * dim, 0.0);
  s.weights.assign(n, 1.0 / n);
  return s;
}

void EnsembleState::validate() const {
  const size_t nd = static_cast<size_t>(count) * dim;
  if (count < 1 || positions.size() != nd || velocities.size() != nd || weights.size() != (size_t)count)
    throw InvalidArgument("ensemble arrays do not match count and dimension");
  for (double w : weights)
    if (!(w >= 0.0)) throw InvalidArgument("ensemble weights must be nonnegative");
  const double total = total_weight();
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidArgument("ensemble weights sum to " + std::to_string(total) + ", expected 1");
  if (!finite()) throw InvalidArgument("ensemble has non-finite coordinates");
}

bool EnsembleState::finite() const {
  for (double x : positions)
    if (!std::isfinite(x)) return false;
  for (double v : velocities)
    if (!std::isfinite(v)) return false;
  return true;
}

double EnsembleState::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

std::vector<double> EnsembleState::momentum() const {
  std::vector<double> p(dim, 0.0);
  for (int i = 0; i < count; ++i)
    for (int a = 0; a < dim; ++a) p[a] += weights[i] * velocities[i * dim + a];
  return p;
}

std::vector<double> EnsembleState::velocity_sum() const {
  std::vector<double> p(dim, 0.0);
  for (int i = 0; i < count; ++i)
    for (int a = 0; a < dim; ++a) p[a] += velocities[i * dim + a];
  return p;
}

}  // namespace mfl::classical
