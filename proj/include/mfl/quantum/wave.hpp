#pragma once

#include <complex>
#include <vector>

#include "mfl/core/grid.hpp"
#include "mfl/core/potential.hpp"
#include "mfl/core/profiles.hpp"
#include "mfl/core/spectral.hpp"

namespace mfl::quantum {

using Complex = std::complex<double>;

/// One-particle wavefunction on a periodic 1-D grid.
struct WaveField {
  SpatialGrid grid;
  std::vector<Complex> values;
  double h = 1.0;
  double time = 0.0;

  int size() const { return static_cast<int>(values.size()); }
  double dx() const { return grid.spacing(0); }
  double norm() const;
  std::vector<double> density() const;
};

/// Largest spacing allowed for a WKB state: h / (4 max|sigma'| + safety).
double required_spacing(double h, double max_momentum, double safety = 0.5);

/// Smallest power-of-two point count on `length` meeting required_spacing.
int resolve_points(double length, double h, double max_momentum, double safety = 0.5);

/// Periodic 1-D grid [-length/2, length/2).
SpatialGrid periodic_line(double length, int points);

/// psi = a exp(i sigma / h), normalized to unit L2 norm. Throws ResolutionError
/// when the spacing exceeds required_spacing.
WaveField wkb_initialize(const AmplitudeProfile& a, const PhaseProfile& sigma, double h, const SpatialGrid& grid,
                         double safety = 0.5);

/// Mass of |psi|^2 in the outer eighth of the box on each side; a proxy for
/// truncation by the periodic domain.
double boundary_mass(const WaveField& psi);

/// Spectral derivative helpers on periodic data (odd derivatives drop the
/// Nyquist mode).
class SpectralOps {
public:
  SpectralOps(int n, double length);

  const std::vector<double>& wavenumbers() const { return k_; }
  void derivative(const std::vector<Complex>& in, std::vector<Complex>& d1);
  void derivatives(const std::vector<Complex>& in, std::vector<Complex>& d1, std::vector<Complex>& d2);
  void derivatives(const std::vector<double>& in, std::vector<double>& d1, std::vector<double>& d2);
  void third_derivative(const std::vector<double>& in, std::vector<double>& d3);
  /// Fraction of spectral energy in the top third of |k|.
  double high_mode_fraction(const std::vector<double>& in);
  ComplexFft& fft() { return fft_; }

private:
  int n_;
  std::vector<double> k_;
  ComplexFft fft_;
  std::vector<Complex> hat_;
};

/// Periodic convolution (phi * rho)(x_j) = sum_l phi(x_j - x_l) rho_l dx with
/// minimum-image pair distances.
class PeriodicConvolver {
public:
  PeriodicConvolver(const TwoBodyPotential& phi, const SpatialGrid& grid);
  void apply(const std::vector<double>& rho, std::vector<double>& out);
  bool trivial() const { return trivial_; }

private:
  int n_;
  double dx_;
  bool trivial_ = false;
  double constant_ = 0.0;
  std::vector<Complex> kernel_hat_;
  std::vector<Complex> work_;
  ComplexFft fft_;
};

}  // namespace mfl::quantum
