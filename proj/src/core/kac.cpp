#include <cmath>

#include "mfl/core/errors.hpp"
#include "mfl/core/potential.hpp"

namespace mfl {

TwoBodyPotential kac_physical_potential(const TwoBodyPotential& phi, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be positive");
  return phi.rescaled(1.0 / lambda, lambda);
}

std::pair<TwoBodyPotential, KacScaling> kac_rescale(const TwoBodyPotential& phi, double lambda,
                                                    double hbar) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be positive");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidArgument("hbar must be positive");
  KacScaling k{lambda, hbar, hbar / lambda};
  if (lambda == 1.0) return {phi, k};
  // With x = lambda q the kinetic term becomes -(hbar/lambda)^2/2 Lap_q and the
  // pair term V(lambda q) = phi(q)/lambda, so the q-frame potential is lambda V(lambda q).
  TwoBodyPotential physical = kac_physical_potential(phi, lambda);
  return {physical.rescaled(lambda, 1.0 / lambda), k};
}

}  // namespace mfl
