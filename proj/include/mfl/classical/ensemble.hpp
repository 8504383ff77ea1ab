#pragma once

#include <span>
#include <vector>

namespace mfl::classical {

/// N particles in R^d with weights; doubles as the empirical measure.
/// Coordinates are row-major: positions[i * dim + a].
struct EnsembleState {
  int count = 0;
  int dim = 1;
  std::vector<double> positions;
  std::vector<double> velocities;
  std::vector<double> weights;
  double time = 0.0;

  /// Zero coordinates, equal weights 1/n.
  static EnsembleState uniform(int n, int dim);

  std::span<const double> position(int i) const { return {positions.data() + i * dim, (size_t)dim}; }
  std::span<const double> velocity(int i) const { return {velocities.data() + i * dim, (size_t)dim}; }
  std::span<double> position(int i) { return {positions.data() + i * dim, (size_t)dim}; }
  std::span<double> velocity(int i) { return {velocities.data() + i * dim, (size_t)dim}; }

  /// Throws InvalidArgument on size mismatch, negative weights, weight sum off
  /// by more than 1e-12, or non-finite coordinates.
  void validate() const;
  bool finite() const;
  double total_weight() const;
  /// Weighted momentum sum_i w_i v_i.
  std::vector<double> momentum() const;
  /// Un-weighted velocity sum sum_i v_i.
  std::vector<double> velocity_sum() const;
};

}  // namespace mfl::classical
