#pragma once

#include <span>
#include <string>

namespace mfl {

enum class PotentialKind { zero, constant, gaussian, harmonic };

const char* to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& name);

/// Sup norms of phi, |grad phi| and the operator norm of the Hessian.
struct PotentialBounds {
  double value = 0.0;
  double gradient = 0.0;
  double hessian = 0.0;
};

/// Even radial pair potential phi(x) = g(|x|^2).
///
/// The harmonic kind is unbounded and exists for closed-form tests only.
class TwoBodyPotential {
public:
  TwoBodyPotential() = default;

  static TwoBodyPotential zero(int dim);
  static TwoBodyPotential constant(int dim, double value);
  static TwoBodyPotential gaussian(int dim, double amplitude, double width);
  static TwoBodyPotential harmonic(int dim, double stiffness);

  PotentialKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double amplitude() const { return amplitude_; }
  /// Gaussian width; 0 for the other kinds.
  double width() const { return width_; }

  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> out) const;
  /// Row-major d x d.
  void hessian(std::span<const double> x, std::span<double> out) const;

  /// Radial profile g(s), s = |x|^2, and its first two derivatives in s.
  double profile(double s) const;
  double profile_d1(double s) const;
  double profile_d2(double s) const;

  PotentialBounds bounds() const;
  bool bounded() const { return kind_ != PotentialKind::harmonic; }
  const char* smoothness() const { return "C-infinity"; }
  bool is_zero_force() const { return kind_ == PotentialKind::zero || kind_ == PotentialKind::constant; }

  /// psi(x) = energy_factor * phi(x / length_factor).
  TwoBodyPotential rescaled(double energy_factor, double length_factor) const;

  std::string describe() const;

private:
  PotentialKind kind_ = PotentialKind::zero;
  int dim_ = 1;
  double amplitude_ = 0.0;
  double width_ = 0.0;
  double inv_two_w2_ = 0.0;
};

/// amplitude * exp(-|x|^2 / (2 width^2)); rejects width <= 0.
TwoBodyPotential make_gaussian_potential(double amplitude, double width, int dim);

struct KacScaling {
  double lambda = 1.0;
  double hbar = 1.0;
  double effective_h = 1.0;
};

/// Physical pair potential V(x) = lambda^{-1} phi(x / lambda).
TwoBodyPotential kac_physical_potential(const TwoBodyPotential& phi, double lambda);

/// Rescales x = lambda q. Returns the q-frame pair potential (coupling 1/N
/// when lambda = N) and the scaling with effective_h = hbar / lambda.
std::pair<TwoBodyPotential, KacScaling> kac_rescale(const TwoBodyPotential& phi, double lambda,
                                                    double hbar);

}  // namespace mfl
