#include "mfl/kinetic/vlasov.hpp"

#include <cmath>
#include <string>

#include "mfl/classical/pair_kernels.hpp"
#include "mfl/core/errors.hpp"

namespace mfl::kinetic {

VlasovSolver::VlasovSolver(const TwoBodyPotential& phi, const SpatialGrid& grid, ThreadPool* pool)
    : solver_(phi, grid), pool_(pool) {}

const ForceFieldCache& VlasovSolver::field_for(const PhaseSpaceCloud& c) {
  if (!cache_ || cached_positions_ != c.positions) {
    cache_ = solver_.solve(c, pool_);
    cached_positions_ = c.positions;
    E_.resize(c.positions.size());
    cache_->evaluate_many(c.positions, E_, pool_);
  }
  return *cache_;
}

void VlasovSolver::advance(PhaseSpaceCloud& c, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("vlasov step needs dt > 0");
  field_for(c);
  for (size_t q = 0; q < c.velocities.size(); ++q) c.velocities[q] += 0.5 * dt * E_[q];
  for (size_t q = 0; q < c.positions.size(); ++q) c.positions[q] += dt * c.velocities[q];
  field_for(c);
  for (size_t q = 0; q < c.velocities.size(); ++q) c.velocities[q] += 0.5 * dt * E_[q];
  c.time += dt;
  if (!c.finite()) throw DivergenceError("cloud diverged at t=" + std::to_string(c.time), c.time);
}

double VlasovSolver::weak_rhs(const PhaseSpaceCloud& c, const TestFunction& F) {
  field_for(c);
  const int d = c.dim;
  std::vector<double> gx(d), gv(d);
  double acc = 0.0;
  for (int i = 0; i < c.count; ++i) {
    F.gradient(c.position(i), c.velocity(i), gx, gv);
    double t = 0.0;
    for (int a = 0; a < d; ++a) t += c.velocities[i * d + a] * gx[a] + E_[i * d + a] * gv[a];
    acc += c.weights[i] * t;
  }
  return acc;
}

PhaseSpaceCloud vlasov_step(const PhaseSpaceCloud& cloud, const TwoBodyPotential& phi, const SpatialGrid& grid,
                            double dt) {
  cloud.validate();
  PhaseSpaceCloud c = cloud;
  VlasovSolver(phi, grid).advance(c, dt);
  return c;
}

CloudMoments cloud_moments(const PhaseSpaceCloud& c, const TwoBodyPotential& phi, ThreadPool* pool) {
  CloudMoments m;
  m.momentum.assign(c.dim, 0.0);
  for (int i = 0; i < c.count; ++i) {
    m.mass += c.weights[i];
    double v2 = 0.0;
    for (int a = 0; a < c.dim; ++a) {
      const double v = c.velocities[i * c.dim + a];
      m.momentum[a] += c.weights[i] * v;
      v2 += v * v;
    }
    m.kinetic += 0.5 * c.weights[i] * v2;
  }
  std::vector<double> V(c.count);
  kernels::potential(phi, c.dim, c.positions, c.positions, c.weights, V, pool);
  for (int i = 0; i < c.count; ++i) m.potential += 0.5 * c.weights[i] * V[i];
  return m;
}

}  // namespace mfl::kinetic
