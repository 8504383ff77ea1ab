#pragma once

#include <string>
#include <vector>

#include "mfl/lab/experiments.hpp"
#include "mfl/quantum/wave.hpp"

namespace mfl::lab::detail {

/// Evolves an N-particle monokinetic ensemble to t and records its panel errors.
double classical_error(const ProblemSetup& setup, int count, classical::InitMode mode, std::uint64_t seed,
                       classical::Scheme scheme, double dt, double t, const std::vector<double>& reference,
                       ExperimentReport& report, int seed_tag, const RunContext& ctx);

struct QuantumPoint {
  double error = 0.0;
  int points = 0;
  double norm_drift = 0.0;
  double boundary_mass = 0.0;
  double edge_mass = 0.0;
  double normalization = 0.0;
};

/// Hartree evolution at semiclassical parameter h, Wigner pairings at t.
QuantumPoint quantum_error(const ProblemSetup& setup, double h, double dt, double t, int max_points,
                           const std::vector<double>& reference, ExperimentReport& report, const RunContext& ctx);

/// Periodic grid meeting the resolution rule for h on the setup's box.
SpatialGrid quantum_grid(const ProblemSetup& setup, double h, double max_momentum, int max_points);

/// Smallest value above `floor` (infinity when none).
double smallest_above(const std::vector<double>& v, double floor);

}  // namespace mfl::lab::detail
