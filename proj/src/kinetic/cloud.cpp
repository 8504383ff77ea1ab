#include "mfl/kinetic/cloud.hpp"

#include <cmath>

#include "mfl/core/errors.hpp"

namespace mfl::kinetic {

PhaseSpaceCloud PhaseSpaceCloud::from_ensemble(const classical::EnsembleState& s) {
  PhaseSpaceCloud c;
  c.count = s.count;
  c.dim = s.dim;
  c.positions = s.positions;
  c.velocities = s.velocities;
  c.weights = s.weights;
  c.time = s.time;
  c.validate();
  return c;
}

classical::EnsembleState PhaseSpaceCloud::to_ensemble() const {
  classical::EnsembleState s;
  s.count = count;
  s.dim = dim;
  s.positions = positions;
  s.velocities = velocities;
  s.weights = weights;
  s.time = time;
  return s;
}

void PhaseSpaceCloud::validate() const {
  const size_t nd = static_cast<size_t>(count) * dim;
  if (count < 1 || positions.size() != nd || velocities.size() != nd || weights.size() != (size_t)count)
    throw InvalidArgument("cloud arrays do not match count and dimension");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidArgument("cloud weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("cloud weights must sum to 1");
  if (!finite()) throw InvalidArgument("cloud has non-finite coordinates");
}

bool PhaseSpaceCloud::finite() const {
  for (double x : positions)
    if (!std::isfinite(x)) return false;
  for (double v : velocities)
    if (!std::isfinite(v)) return false;
  return true;
}

double cloud_pairing(const PhaseSpaceCloud& c, const TestFunction& F) {
  double acc = 0.0;
  for (int i = 0; i < c.count; ++i) acc += c.weights[i] * F(c.position(i), c.velocity(i));
  return acc;
}

}  // namespace mfl::kinetic
