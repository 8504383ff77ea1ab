#include "mfl/core/profiles.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mfl/core/errors.hpp"

namespace mfl {

GaussianDensity GaussianDensity::isotropic(int dim, double center, double stddev, double mass) {
  GaussianDensity g;
  g.center.assign(dim, center);
  g.stddev.assign(dim, stddev);
  g.mass = mass;
  g.validate();
  return g;
}

void GaussianDensity::validate() const {
  if (center.empty() || center.size() > 3 || stddev.size() != center.size())
    throw InvalidArgument("density center/stddev must have matching length 1..3");
  for (double s : stddev)
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("density stddev must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidArgument("density mass must be positive");
}

double GaussianDensity::pdf(std::span<const double> x) const {
  double p = mass;
  for (int a = 0; a < dim(); ++a) {
    const double z = (x[a] - center[a]) / stddev[a];
    p *= std::exp(-0.5 * z * z) / (stddev[a] * std::sqrt(2.0 * std::numbers::pi));
  }
  return p;
}

double GaussianDensity::quantile(int axis, double m) const {
  if (!(m > 0.0 && m < 1.0)) throw InvalidArgument("quantile level must lie in (0, 1)");
  return center[axis] + stddev[axis] * std::numbers::sqrt2 * boost::math::erf_inv(2.0 * m - 1.0);
}

void GaussianDensity::sample(std::mt19937_64& rng, std::span<double> out) const {
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int a = 0; a < dim(); ++a) out[a] = center[a] + stddev[a] * n01(rng);
}

PhaseProfile PhaseProfile::zero() { return {}; }

PhaseProfile PhaseProfile::linear(std::vector<double> w) {
  PhaseProfile p;
  p.drift = std::move(w);
  return p;
}

PhaseProfile PhaseProfile::sine(double amplitude, double wavenumber) {
  PhaseProfile p;
  p.sine_amplitude = amplitude;
  p.sine_wavenumber = wavenumber;
  return p;
}

PhaseProfile PhaseProfile::quadratic(double curvature) {
  PhaseProfile p;
  p.curvature = curvature;
  return p;
}

bool PhaseProfile::is_zero() const {
  for (double w : drift)
    if (w != 0.0) return false;
  return sine_amplitude == 0.0 && curvature == 0.0;
}

double PhaseProfile::value(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a)
    s += drift_component(a) * x[a] + sine_amplitude * std::sin(sine_wavenumber * x[a]) +
         0.5 * curvature * x[a] * x[a];
  return s;
}

void PhaseProfile::gradient(std::span<const double> x, std::span<double> out) const {
  for (std::size_t a = 0; a < x.size(); ++a)
    out[a] = drift_component(a) + sine_amplitude * sine_wavenumber * std::cos(sine_wavenumber * x[a]) +
             curvature * x[a];
}

void PhaseProfile::hessian(std::span<const double> x, std::span<double> out) const {
  const std::size_t d = x.size();
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      out[a * d + b] = a == b ? curvature - sine_amplitude * sine_wavenumber * sine_wavenumber *
                                                std::sin(sine_wavenumber * x[a])
                              : 0.0;
}

double PhaseProfile::periodic_part(double x) const {
  return sine_amplitude * std::sin(sine_wavenumber * x);
}

double PhaseProfile::max_gradient(int dim, double R) const {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double c = std::abs(drift_component(a)) + std::abs(sine_amplitude * sine_wavenumber) +
                     std::abs(curvature) * R;
    s += c * c;
  }
  return std::sqrt(s);
}

std::string PhaseProfile::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "sigma(";
  bool any = false;
  if (!drift.empty()) {
    os << "drift=[";
    for (std::size_t a = 0; a < drift.size(); ++a) os << (a ? "," : "") << drift[a];
    os << "]";
    any = true;
  }
  if (sine_amplitude != 0.0) {
    os << (any ? ", " : "") << "sine=" << sine_amplitude << "*sin(" << sine_wavenumber << "x)";
    any = true;
  }
  if (curvature != 0.0) os << (any ? ", " : "") << "curvature=" << curvature;
  os << ")";
  return os.str();
}

Complex AmplitudeProfile::value(std::span<const double> x) const {
  const double r = std::sqrt(density.pdf(x));
  if (chirp == 0.0) return {r, 0.0};
  double q = 0.0;
  for (int a = 0; a < density.dim(); ++a) q += (x[a] - density.center[a]) * (x[a] - density.center[a]);
  return std::polar(r, 0.5 * chirp * q);
}

}  // namespace mfl
