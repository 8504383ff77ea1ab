#pragma once

#include <Eigen/Dense>
#include <functional>

#include "mfl/classical/flow.hpp"

namespace mfl::classical {

/// Phase-space flow together with tangent columns (dX, dV), each (N d) x C.
/// The tangent update is the exact derivative of the discrete step map.
class TangentStepper {
public:
  TangentStepper(TwoBodyPotential phi, Scheme scheme = Scheme::verlet, ThreadPool* pool = nullptr);

  void advance(EnsembleState& state, Eigen::MatrixXd& dX, Eigen::MatrixXd& dV, double dt);

private:
  void refresh(const EnsembleState& s);

  TwoBodyPotential phi_;
  Scheme scheme_;
  ThreadPool* pool_;
  std::vector<double> acc_;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> jac_;
  std::vector<double> cached_positions_;
};

struct TangentResult {
  EnsembleState state;
  Eigen::MatrixXd dX;
  Eigen::MatrixXd dV;
  int steps = 0;
  double dt = 0.0;
};

/// Called after every step with the current state and tangents.
using TangentObserver = std::function<void(const EnsembleState&, const Eigen::MatrixXd&, const Eigen::MatrixXd&)>;

TangentResult propagate_tangent(const EnsembleState& state0, const TwoBodyPotential& phi, double t,
                                double dt, Eigen::MatrixXd dX0, Eigen::MatrixXd dV0,
                                const FlowOptions& options = {}, const TangentObserver& observe = {});

}  // namespace mfl::classical
