#include "mfl/quantum/wave.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfl/core/errors.hpp"
#include "mfl/core/potential.hpp"

namespace mfl::quantum {

double WaveField::norm() const {
  double s = 0.0;
  for (const Complex& z : values) s += std::norm(z);
  return std::sqrt(s * dx());
}

std::vector<double> WaveField::density() const {
  std::vector<double> r(values.size());
  for (size_t i = 0; i < values.size(); ++i) r[i] = std::norm(values[i]);
  return r;
}

double required_spacing(double h, double max_momentum, double safety) {
  if (!(h > 0.0)) throw InvalidArgument("h must be positive");
  if (!(safety > 0.0)) throw InvalidArgument("resolution safety must be positive");
  return h / (4.0 * std::abs(max_momentum) + safety);
}

int resolve_points(double length, double h, double max_momentum, double safety) {
  const double dx = required_spacing(h, max_momentum, safety);
  return static_cast<int>(next_power_of_two(std::max<long>(16, static_cast<long>(std::ceil(length / dx)))));
}

SpatialGrid periodic_line(double length, int points) {
  if (!(length > 0.0)) throw InvalidArgument("domain length must be positive");
  return SpatialGrid::line(-0.5 * length, 0.5 * length, points, true);
}

WaveField wkb_initialize(const AmplitudeProfile& a, const PhaseProfile& sigma, double h, const SpatialGrid& grid,
                         double safety) {
  grid.validate();
  if (grid.dim != 1 || !grid.periodic) throw InvalidArgument("wave fields live on a periodic 1-D grid");
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("h must be positive");
  const std::vector<double> x = grid.axis_nodes(0);
  double pmax = 0.0;
  for (double xi : x) {
    double g;
    sigma.gradient(std::span<const double>(&xi, 1), std::span<double>(&g, 1));
    pmax = std::max(pmax, std::abs(g));
  }
  const double need = required_spacing(h, pmax, safety);
  if (grid.spacing(0) > need) {
    const int n = resolve_points(grid.extent(0), h, pmax, safety);
    throw ResolutionError("grid spacing " + std::to_string(grid.spacing(0)) + " does not resolve h=" +
                              std::to_string(h) + " oscillations; need spacing <= " + std::to_string(need) +
                              " (" + std::to_string(n) + " points on this box)",
                          need);
  }
  WaveField psi;
  psi.grid = grid;
  psi.h = h;
  psi.values.resize(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    psi.values[i] = a.value(x[i]) * std::polar(1.0, sigma.value(std::span<const double>(&x[i], 1)) / h);
  const double nrm = psi.norm();
  if (!(nrm > 0.0)) throw InvalidArgument("amplitude vanishes on the grid");
  for (Complex& z : psi.values) z /= nrm;
  return psi;
}

double boundary_mass(const WaveField& psi) {
  const int n = psi.size(), edge = std::max(1, n / 16);
  double s = 0.0;
  for (int i = 0; i < edge; ++i) s += std::norm(psi.values[i]) + std::norm(psi.values[n - 1 - i]);
  return s * psi.dx();
}

SpectralOps::SpectralOps(int n, double length)
    : n_(n), k_(fft_wavenumbers(n, length)), fft_(n), hat_(n) {}

void SpectralOps::derivative(const std::vector<Complex>& in, std::vector<Complex>& d1) {
  fft_.forward(in, hat_);
  d1.resize(n_);
  Complex* b = fft_.buffer();
  for (int i = 0; i < n_; ++i) b[i] = Complex(0.0, k_[i]) * hat_[i] / double(n_);
  if (n_ % 2 == 0) b[n_ / 2] = 0.0;
  fft_.backward_in_place();
  std::copy(b, b + n_, d1.begin());
}

void SpectralOps::derivatives(const std::vector<Complex>& in, std::vector<Complex>& d1, std::vector<Complex>& d2) {
  fft_.forward(in, hat_);
  d1.resize(n_);
  d2.resize(n_);
  Complex* b = fft_.buffer();
  for (int i = 0; i < n_; ++i) b[i] = Complex(0.0, k_[i]) * hat_[i] / double(n_);
  if (n_ % 2 == 0) b[n_ / 2] = 0.0;
  fft_.backward_in_place();
  std::copy(b, b + n_, d1.begin());
  for (int i = 0; i < n_; ++i) b[i] = -k_[i] * k_[i] * hat_[i] / double(n_);
  fft_.backward_in_place();
  std::copy(b, b + n_, d2.begin());
}

void SpectralOps::derivatives(const std::vector<double>& in, std::vector<double>& d1, std::vector<double>& d2) {
  std::vector<Complex> c(in.begin(), in.end()), c1, c2;
  derivatives(c, c1, c2);
  d1.resize(n_);
  d2.resize(n_);
  for (int i = 0; i < n_; ++i) {
    d1[i] = c1[i].real();
    d2[i] = c2[i].real();
  }
}

void SpectralOps::third_derivative(const std::vector<double>& in, std::vector<double>& d3) {
  std::vector<Complex> c(in.begin(), in.end());
  fft_.forward(c, hat_);
  Complex* b = fft_.buffer();
  for (int i = 0; i < n_; ++i) b[i] = Complex(0.0, -k_[i] * k_[i] * k_[i]) * hat_[i] / double(n_);
  if (n_ % 2 == 0) b[n_ / 2] = 0.0;
  fft_.backward_in_place();
  d3.resize(n_);
  for (int i = 0; i < n_; ++i) d3[i] = b[i].real();
}

double SpectralOps::high_mode_fraction(const std::vector<double>& in) {
  std::vector<Complex> c(in.begin(), in.end());
  fft_.forward(c, hat_);
  const double kmax = std::abs(k_[n_ / 2]);
  double hi = 0.0, all = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double e = std::norm(hat_[i]);
    all += e;
    if (std::abs(k_[i]) > 2.0 * kmax / 3.0) hi += e;
  }
  return all > 0.0 ? hi / all : 0.0;
}

PeriodicConvolver::PeriodicConvolver(const TwoBodyPotential& phi, const SpatialGrid& grid)
    : n_(grid.points[0]), dx_(grid.spacing(0)), fft_(n_) {
  if (phi.dim() != 1) throw InvalidArgument("quantum solvers need a 1-D potential");
  if (phi.is_zero_force()) {
    trivial_ = true;
    constant_ = phi.profile(0.0);
    return;
  }
  std::vector<Complex> k(n_);
  for (int i = 0; i < n_; ++i) {
    const double r = (i <= n_ / 2 ? i : i - n_) * dx_;
    k[i] = phi.value(std::span<const double>(&r, 1));
  }
  kernel_hat_.resize(n_);
  fft_.forward(k, kernel_hat_);
  work_.resize(n_);
}

void PeriodicConvolver::apply(const std::vector<double>& rho, std::vector<double>& out) {
  out.resize(n_);
  if (trivial_) {
    double m = 0.0;
    for (double r : rho) m += r;
    std::fill(out.begin(), out.end(), constant_ * m * dx_);
    return;
  }
  Complex* b = fft_.buffer();
  for (int i = 0; i < n_; ++i) b[i] = rho[i];
  fft_.forward_in_place();
  const double scale = dx_ / n_;
  for (int i = 0; i < n_; ++i) b[i] *= kernel_hat_[i] * scale;
  fft_.backward_in_place();
  for (int i = 0; i < n_; ++i) out[i] = b[i].real();
}

}  // namespace mfl::quantum
