#pragma once

#include <atomic>

#include "mfl/quantum/wave.hpp"

namespace mfl::quantum {

/// Strang splitting for i h psi_t = -(h^2/2) psi'' + (phi * |psi|^2) psi:
/// half potential phase, exact kinetic step exp(-i h k^2 dt / 2) in Fourier
/// space, half potential phase with the refreshed density.
class HartreeSolver {
public:
  HartreeSolver(const TwoBodyPotential& phi, const SpatialGrid& grid, double h);

  void step(WaveField& psi, double dt);
  /// Uniform steps of at most dt up to psi.time + t.
  void evolve(WaveField& psi, double t, double dt, const std::atomic<bool>* cancel = nullptr);
  /// phi * |psi|^2 on the grid.
  std::vector<double> potential(const WaveField& psi);

private:
  void potential_phase(WaveField& psi, double half_dt);

  SpatialGrid grid_;
  double h_;
  PeriodicConvolver conv_;
  ComplexFft fft_;
  std::vector<double> k_;
  std::vector<double> V_;
  std::vector<Complex> kinetic_;
  double kinetic_dt_ = 0.0;
  bool have_V_ = false;
  const Complex* cached_data_ = nullptr;
  double cached_time_ = 0.0;
};

WaveField hartree_step(const WaveField& psi, const TwoBodyPotential& phi, double dt);

}  // namespace mfl::quantum
