#include "mfl/classical/tangent.hpp"

#include <string>

#include "mfl/classical/pair_kernels.hpp"
#include "mfl/core/errors.hpp"

namespace mfl::classical {

TangentStepper::TangentStepper(TwoBodyPotential phi, Scheme scheme, ThreadPool* pool)
    : phi_(std::move(phi)), scheme_(scheme), pool_(pool) {}

void TangentStepper::refresh(const EnsembleState& s) {
  if (acc_.size() == s.positions.size() && cached_positions_ == s.positions) return;
  const size_t nd = s.positions.size();
  acc_.resize(nd);
  kernels::field(phi_, s.dim, s.positions, s.positions, s.weights, acc_, pool_);
  jac_.resize(nd, nd);
  kernels::acceleration_jacobian(phi_, s.dim, s.positions, s.weights, {jac_.data(), nd * nd}, pool_);
  cached_positions_ = s.positions;
}

void TangentStepper::advance(EnsembleState& s, Eigen::MatrixXd& dX, Eigen::MatrixXd& dV, double dt) {
  const bool force = !phi_.is_zero_force();
  for (double f : scheme_fractions(scheme_)) {
    const double h = f * dt;
    refresh(s);
    for (size_t q = 0; q < s.velocities.size(); ++q) s.velocities[q] += 0.5 * h * acc_[q];
    if (force) dV.noalias() += (0.5 * h) * (jac_ * dX);
    for (size_t q = 0; q < s.positions.size(); ++q) s.positions[q] += h * s.velocities[q];
    dX += h * dV;
    refresh(s);
    for (size_t q = 0; q < s.velocities.size(); ++q) s.velocities[q] += 0.5 * h * acc_[q];
    if (force) dV.noalias() += (0.5 * h) * (jac_ * dX);
  }
  s.time += dt;
}

TangentResult propagate_tangent(const EnsembleState& state0, const TwoBodyPotential& phi, double t,
                                double dt, Eigen::MatrixXd dX0, Eigen::MatrixXd dV0,
                                const FlowOptions& options, const TangentObserver& observe) {
  state0.validate();
  const Eigen::Index nd = static_cast<Eigen::Index>(state0.positions.size());
  if (dX0.rows() != nd || dV0.rows() != nd || dX0.cols() != dV0.cols())
    throw InvalidArgument("tangent columns must have N*d rows and matching column counts");
  TangentResult r;
  r.state = state0;
  r.dX = std::move(dX0);
  r.dV = std::move(dV0);
  r.steps = step_count(t, dt);
  r.dt = r.steps ? t / r.steps : dt;
  const double t0 = state0.time;
  TangentStepper stepper(phi, options.scheme, options.pool);
  for (int k = 1; k <= r.steps; ++k) {
    if (options.cancel && options.cancel->load()) throw Cancelled();
    stepper.advance(r.state, r.dX, r.dV, r.dt);
    r.state.time = t0 + k * r.dt;
    if (!r.state.finite() || !r.dX.allFinite() || !r.dV.allFinite())
      throw DivergenceError("tangent flow diverged at t=" + std::to_string(r.state.time), r.state.time);
    if (observe) observe(r.state, r.dX, r.dV);
  }
  return r;
}

}  // namespace mfl::classical
