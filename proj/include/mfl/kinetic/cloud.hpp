#pragma once

#include <span>
#include <vector>

#include "mfl/classical/ensemble.hpp"
#include "mfl/core/test_panel.hpp"

namespace mfl::kinetic {

/// Weighted phase-space markers carrying f(x, v, t) as a measure.
struct PhaseSpaceCloud {
  int count = 0;
  int dim = 1;
  std::vector<double> positions;
  std::vector<double> velocities;
  std::vector<double> weights;
  double time = 0.0;

  static PhaseSpaceCloud from_ensemble(const classical::EnsembleState& s);
  classical::EnsembleState to_ensemble() const;

  std::span<const double> position(int i) const { return {positions.data() + i * dim, (size_t)dim}; }
  std::span<const double> velocity(int i) const { return {velocities.data() + i * dim, (size_t)dim}; }

  /// Weights nonnegative and summing to 1 within 1e-12; finite coordinates.
  void validate() const;
  bool finite() const;
};

double cloud_pairing(const PhaseSpaceCloud& cloud, const TestFunction& F);

}  // namespace mfl::kinetic
