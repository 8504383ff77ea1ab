#include "mfl/quantum/hartree.hpp"

#include <cmath>
#include <string>

#include "mfl/core/errors.hpp"
#include "mfl/core/stepping.hpp"

namespace mfl::quantum {

HartreeSolver::HartreeSolver(const TwoBodyPotential& phi, const SpatialGrid& grid, double h)
    : grid_(grid), h_(h), conv_(phi, grid), fft_(grid.points[0]), k_(fft_wavenumbers(grid.points[0], grid.extent(0))) {
  if (!(h > 0.0)) throw InvalidArgument("h must be positive");
  if (!grid.periodic || grid.dim != 1) throw InvalidArgument("Hartree solver needs a periodic 1-D grid");
}

std::vector<double> HartreeSolver::potential(const WaveField& psi) {
  std::vector<double> V;
  conv_.apply(psi.density(), V);
  return V;
}

void HartreeSolver::potential_phase(WaveField& psi, double half_dt) {
  for (int i = 0; i < psi.size(); ++i) psi.values[i] *= std::polar(1.0, -V_[i] * half_dt / h_);
}

void HartreeSolver::step(WaveField& psi, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("Hartree step needs dt > 0");
  if (psi.size() != grid_.points[0]) throw InvalidArgument("wave field does not match solver grid");
  const int n = psi.size();
  if (!have_V_ || cached_data_ != psi.values.data() || cached_time_ != psi.time) conv_.apply(psi.density(), V_);
  if (kinetic_dt_ != dt) {
    kinetic_.resize(n);
    for (int i = 0; i < n; ++i) kinetic_[i] = std::polar(1.0 / n, -0.5 * h_ * k_[i] * k_[i] * dt);
    kinetic_dt_ = dt;
  }
  potential_phase(psi, 0.5 * dt);
  Complex* b = fft_.buffer();
  std::copy(psi.values.begin(), psi.values.end(), b);
  fft_.forward_in_place();
  for (int i = 0; i < n; ++i) b[i] *= kinetic_[i];
  fft_.backward_in_place();
  std::copy(b, b + n, psi.values.begin());
  // |psi|^2 is unchanged by the closing phase, so V is reused by the next step.
  conv_.apply(psi.density(), V_);
  potential_phase(psi, 0.5 * dt);
  psi.time += dt;
  have_V_ = true;
  cached_data_ = psi.values.data();
  cached_time_ = psi.time;
  for (const Complex& z : psi.values)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw DivergenceError("Hartree evolution produced non-finite values at t=" + std::to_string(psi.time), psi.time);
}

void HartreeSolver::evolve(WaveField& psi, double t, double dt, const std::atomic<bool>* cancel) {
  const int steps = uniform_steps(t, dt);
  if (steps == 0) return;
  const double h = t / steps, t0 = psi.time;
  for (int k = 1; k <= steps; ++k) {
    if (cancel && cancel->load()) throw Cancelled();
    step(psi, h);
    psi.time = t0 + k * h;
    cached_time_ = psi.time;
  }
}

WaveField hartree_step(const WaveField& psi, const TwoBodyPotential& phi, double dt) {
  WaveField out = psi;
  HartreeSolver(phi, psi.grid, psi.h).step(out, dt);
  return out;
}

}  // namespace mfl::quantum
