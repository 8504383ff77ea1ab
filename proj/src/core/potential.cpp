#include "mfl/core/potential.hpp"

#include <cmath>
#include <sstream>

#include "mfl/core/errors.hpp"

namespace mfl {

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return s;
}

void check_dim(int dim) {
  if (dim < 1 || dim > 3) throw InvalidArgument("potential dimension must be 1, 2 or 3");
}

}  // namespace

const char* to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::constant: return "constant";
    case PotentialKind::gaussian: return "gaussian";
    case PotentialKind::harmonic: return "harmonic";
  }
  return "unknown";
}

PotentialKind potential_kind_from_string(const std::string& name) {
  if (name == "zero") return PotentialKind::zero;
  if (name == "constant") return PotentialKind::constant;
  if (name == "gaussian") return PotentialKind::gaussian;
  if (name == "harmonic") return PotentialKind::harmonic;
  throw InvalidArgument("unknown potential kind '" + name + "'");
}

TwoBodyPotential TwoBodyPotential::zero(int dim) {
  check_dim(dim);
  TwoBodyPotential p;
  p.kind_ = PotentialKind::zero;
  p.dim_ = dim;
  return p;
}

TwoBodyPotential TwoBodyPotential::constant(int dim, double value) {
  check_dim(dim);
  if (!std::isfinite(value)) throw InvalidArgument("constant potential must be finite");
  TwoBodyPotential p;
  p.kind_ = PotentialKind::constant;
  p.dim_ = dim;
  p.amplitude_ = value;
  return p;
}

TwoBodyPotential TwoBodyPotential::gaussian(int dim, double amplitude, double width) {
  check_dim(dim);
  if (!std::isfinite(amplitude)) throw InvalidArgument("potential amplitude must be finite");
  if (!(width > 0.0) || !std::isfinite(width))
    throw InvalidArgument("potential width must be positive, got " + std::to_string(width));
  TwoBodyPotential p;
  p.kind_ = PotentialKind::gaussian;
  p.dim_ = dim;
  p.amplitude_ = amplitude;
  p.width_ = width;
  p.inv_two_w2_ = 0.5 / (width * width);
  return p;
}

TwoBodyPotential TwoBodyPotential::harmonic(int dim, double stiffness) {
  check_dim(dim);
  if (!std::isfinite(stiffness)) throw InvalidArgument("harmonic stiffness must be finite");
  TwoBodyPotential p;
  p.kind_ = PotentialKind::harmonic;
  p.dim_ = dim;
  p.amplitude_ = stiffness;
  return p;
}

TwoBodyPotential make_gaussian_potential(double amplitude, double width, int dim) {
  return TwoBodyPotential::gaussian(dim, amplitude, width);
}

double TwoBodyPotential::profile(double s) const {
  switch (kind_) {
    case PotentialKind::zero: return 0.0;
    case PotentialKind::constant: return amplitude_;
    case PotentialKind::gaussian: return amplitude_ * std::exp(-s * inv_two_w2_);
    case PotentialKind::harmonic: return 0.5 * amplitude_ * s;
  }
  return 0.0;
}

double TwoBodyPotential::profile_d1(double s) const {
  switch (kind_) {
    case PotentialKind::zero:
    case PotentialKind::constant: return 0.0;
    case PotentialKind::gaussian: return -inv_two_w2_ * amplitude_ * std::exp(-s * inv_two_w2_);
    case PotentialKind::harmonic: return 0.5 * amplitude_;
  }
  return 0.0;
}

double TwoBodyPotential::profile_d2(double s) const {
  if (kind_ == PotentialKind::gaussian)
    return inv_two_w2_ * inv_two_w2_ * amplitude_ * std::exp(-s * inv_two_w2_);
  return 0.0;
}

double TwoBodyPotential::value(std::span<const double> x) const { return profile(norm2(x)); }

void TwoBodyPotential::gradient(std::span<const double> x, std::span<double> out) const {
  const double g1 = 2.0 * profile_d1(norm2(x));
  for (int a = 0; a < dim_; ++a) out[a] = g1 * x[a];
}

void TwoBodyPotential::hessian(std::span<const double> x, std::span<double> out) const {
  const double s = norm2(x);
  const double g1 = 2.0 * profile_d1(s);
  const double g2 = 4.0 * profile_d2(s);
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b) out[a * dim_ + b] = g2 * x[a] * x[b] + (a == b ? g1 : 0.0);
}

PotentialBounds TwoBodyPotential::bounds() const {
  PotentialBounds b;
  switch (kind_) {
    case PotentialKind::zero: break;
    case PotentialKind::constant: b.value = std::abs(amplitude_); break;
    case PotentialKind::gaussian:
      b.value = std::abs(amplitude_);
      b.gradient = std::abs(amplitude_) * std::exp(-0.5) / width_;
      b.hessian = std::abs(amplitude_) / (width_ * width_);
      break;
    case PotentialKind::harmonic:
      b.value = b.gradient = INFINITY;
      b.hessian = std::abs(amplitude_);
      break;
  }
  return b;
}

TwoBodyPotential TwoBodyPotential::rescaled(double energy_factor, double length_factor) const {
  if (!(length_factor > 0.0)) throw InvalidArgument("length factor must be positive");
  switch (kind_) {
    case PotentialKind::zero: return zero(dim_);
    case PotentialKind::constant: return constant(dim_, amplitude_ * energy_factor);
    case PotentialKind::gaussian:
      return gaussian(dim_, amplitude_ * energy_factor, width_ * length_factor);
    case PotentialKind::harmonic:
      return harmonic(dim_, amplitude_ * energy_factor / (length_factor * length_factor));
  }
  return *this;
}

std::string TwoBodyPotential::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(kind_) << "(d=" << dim_;
  if (kind_ == PotentialKind::gaussian) os << ", amplitude=" << amplitude_ << ", width=" << width_;
  if (kind_ == PotentialKind::constant) os << ", value=" << amplitude_;
  if (kind_ == PotentialKind::harmonic) os << ", stiffness=" << amplitude_;
  os << ")";
  return os.str();
}

}  // namespace mfl
