#pragma once

#include <atomic>
#include <vector>

#include "mfl/classical/integrator.hpp"

namespace mfl::classical {

struct FlowOptions {
  Scheme scheme = Scheme::verlet;
  /// Record energy drift every this many steps (the final step is always recorded).
  int record_every = 1;
  bool track_energy = true;
  ThreadPool* pool = nullptr;
  const std::atomic<bool>* cancel = nullptr;
};

struct EnergySample {
  double time = 0.0;
  double energy = 0.0;
  /// (E(t) - E(0)) / |E(0)|, or absolute drift when E(0) = 0.
  double relative_drift = 0.0;
};

struct FlowResult {
  EnsembleState final_state;
  std::vector<EnergySample> energy;
  int steps = 0;
  double dt = 0.0;

  double max_energy_drift() const;
};

/// Number of equal steps covering t with step at most dt.
int step_count(double t, double dt);

/// Applies the time-t flow map with ceil(t/dt) equal steps.
FlowResult flow(const EnsembleState& state0, const TwoBodyPotential& phi, double t, double dt,
                const FlowOptions& options = {});

}  // namespace mfl::classical
