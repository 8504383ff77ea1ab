#pragma once

#include <cstdint>
#include <string>

#include "mfl/classical/ensemble.hpp"
#include "mfl/core/profiles.hpp"

namespace mfl::classical {

enum class InitMode {
  /// iid draws from rho, equal weights (mt19937_64).
  monte_carlo,
  /// Midpoint tensor grid over +-box_sigmas, weights rho(x) dx^d.
  quadrature,
  /// Per-axis equal-mass quantile nodes, equal weights.
  quantile
};

const char* to_string(InitMode m);
InitMode init_mode_from_string(const std::string& name);

struct MonokineticOptions {
  InitMode mode = InitMode::quadrature;
  std::uint64_t seed = 0;
  double box_sigmas = 8.0;
};

/// Positions distributed by rho, velocities u(x_i) = grad sigma(x_i) exactly.
/// Quadrature and quantile modes need count = n^d.
EnsembleState monokinetic_init(const GaussianDensity& rho, const PhaseProfile& sigma, int count,
                               const MonokineticOptions& options = {});

}  // namespace mfl::classical
