#pragma once

#include <atomic>
#include <optional>

#include "mfl/kinetic/cloud.hpp"
#include "mfl/kinetic/field.hpp"

namespace mfl::kinetic {

/// Particle-in-cell characteristics solver: kick-drift-kick with the field
/// rebuilt from the cloud after every drift and reused by the next opening
/// kick. Weights are never touched.
class VlasovSolver {
public:
  VlasovSolver(const TwoBodyPotential& phi, const SpatialGrid& grid, ThreadPool* pool = nullptr);

  void advance(PhaseSpaceCloud& cloud, double dt);
  /// Field of the cloud last passed to advance (rebuilt if positions changed).
  const ForceFieldCache& field_for(const PhaseSpaceCloud& cloud);
  /// <f, v . grad_x F> + <f, E . grad_v F> with E from the current field.
  double weak_rhs(const PhaseSpaceCloud& cloud, const TestFunction& F);

private:
  FieldSolver solver_;
  ThreadPool* pool_;
  std::optional<ForceFieldCache> cache_;
  std::vector<double> cached_positions_;
  std::vector<double> E_;
};

PhaseSpaceCloud vlasov_step(const PhaseSpaceCloud& cloud, const TwoBodyPotential& phi, const SpatialGrid& grid,
                            double dt);

struct CloudMoments {
  double mass = 0.0;
  std::vector<double> momentum;
  double kinetic = 0.0;
  /// (1/2) sum_i w_i sum_j w_j phi(x_i - x_j), direct pair sum.
  double potential = 0.0;
  double energy() const { return kinetic + potential; }
};

CloudMoments cloud_moments(const PhaseSpaceCloud& cloud, const TwoBodyPotential& phi, ThreadPool* pool = nullptr);

}  // namespace mfl::kinetic
