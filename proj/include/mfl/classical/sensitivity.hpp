#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mfl/classical/flow.hpp"
#include "mfl/core/profiles.hpp"

namespace mfl::classical {

/// Derivatives of particle positions and momenta at time t with respect to the
/// initial positions x_j^gamma, j in `indices`, with velocities slaved to
/// grad sigma. Column block c belongs to indices[c]; rows run over all N d.
struct SensitivityBlocks {
  int count = 0;
  int dim = 1;
  double time = 0.0;
  std::vector<int> indices;
  Eigen::MatrixXd position;
  Eigen::MatrixXd momentum;

  /// d x d block (i, indices[c]) of the position or momentum matrix.
  Eigen::MatrixXd position_block(int i, int c) const;
  Eigen::MatrixXd momentum_block(int i, int c) const;
  /// max over i != j and components of |dx_i/dx_j| + |dp_i/dx_j|.
  double max_off_diagonal() const;
  /// max over selected j and components of |dx_j/dx_j| + |dp_j/dx_j|.
  double max_diagonal() const;
};

/// Tangent-linear sensitivities; the initial velocity tangent of column j is
/// Hess sigma(x_j) applied to the unit position perturbation.
SensitivityBlocks sensitivity_blocks(const EnsembleState& state0, const TwoBodyPotential& phi,
                                     const PhaseProfile& sigma, double t, double dt,
                                     const std::vector<int>& indices, const FlowOptions& options = {});

/// Derivative of the momenta at time t along the trajectory, re-expressed in
/// the coordinates reached at time s: (dV_t/dY) (dX_s/dY)^{-1}, Y the initial
/// positions with slaved velocities. `position` holds (dX_t/dY)(dX_s/dY)^{-1}.
/// s = 0 reproduces the momentum block of sensitivity_blocks.
SensitivityBlocks pullback_momentum_sensitivity(const EnsembleState& state0, const TwoBodyPotential& phi,
                                                const PhaseProfile& sigma, double t, double s, double dt,
                                                const std::vector<int>& indices,
                                                const FlowOptions& options = {});

struct JacobianBounds {
  double time = 0.0;
  /// Determinants of the diagonal blocks d x_i(t) / d x_i(0) of the slaved position map.
  std::vector<double> diagonal_dets;
  double min_diagonal_det = 1.0;
  double max_diagonal_det = 1.0;
  /// Smallest diagonal determinant seen at any step in [0, t].
  double min_over_trajectory = 1.0;
  /// Full 2Nd phase-space Jacobian determinant at t.
  double phase_space_det = 1.0;
  /// max |det - 1| over all steps.
  double max_liouville_error = 0.0;
  bool caustic = false;
  double caustic_time = -1.0;
};

constexpr double kCausticThreshold = 0.05;

JacobianBounds flow_jacobian_bounds(const EnsembleState& state0, const TwoBodyPotential& phi,
                                    const PhaseProfile& sigma, double t, double dt,
                                    const FlowOptions& options = {},
                                    double caustic_threshold = kCausticThreshold);

/// Block-diagonal Hess sigma(x_i) for all particles, (N d) x (N d).
Eigen::MatrixXd slaving_matrix(const EnsembleState& state, const PhaseProfile& sigma);

}  // namespace mfl::classical
