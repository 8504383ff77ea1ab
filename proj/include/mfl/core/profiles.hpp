#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace mfl {

using Complex = std::complex<double>;

/// Product Gaussian density with per-axis center and standard deviation.
struct GaussianDensity {
  std::vector<double> center{0.0};
  std::vector<double> stddev{1.0};
  double mass = 1.0;

  static GaussianDensity isotropic(int dim, double center, double stddev, double mass = 1.0);

  int dim() const { return static_cast<int>(center.size()); }
  void validate() const;
  double pdf(std::span<const double> x) const;
  /// Inverse CDF on one axis, m in (0, 1).
  double quantile(int axis, double m) const;
  void sample(std::mt19937_64& rng, std::span<double> out) const;
};

/// sigma(x) = drift . x + A sum_a sin(k x_a) + (curvature/2) |x|^2.
struct PhaseProfile {
  std::vector<double> drift;  // empty means zero
  double sine_amplitude = 0.0;
  double sine_wavenumber = 1.0;
  double curvature = 0.0;

  static PhaseProfile zero();
  static PhaseProfile linear(std::vector<double> w);
  static PhaseProfile sine(double amplitude, double wavenumber);
  static PhaseProfile quadratic(double curvature);

  bool is_zero() const;
  double drift_component(int axis) const { return axis < (int)drift.size() ? drift[axis] : 0.0; }
  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> out) const;
  /// Row-major d x d.
  void hessian(std::span<const double> x, std::span<double> out) const;
  /// Smooth part without the linear drift (what a periodic grid can hold).
  double periodic_part(double x) const;
  /// sup |grad sigma| over the box |x_a| <= R.
  double max_gradient(int dim, double R) const;
  std::string describe() const;
};

/// a(x) = sqrt(rho(x)) exp(i chirp |x - c|^2 / 2).
struct AmplitudeProfile {
  GaussianDensity density;
  double chirp = 0.0;

  Complex value(std::span<const double> x) const;
  Complex value(double x) const { return value(std::span<const double>(&x, 1)); }
};

}  // namespace mfl
