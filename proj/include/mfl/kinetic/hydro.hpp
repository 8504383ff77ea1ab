#pragma once

#include <atomic>
#include <string>
#include <vector>

#include "mfl/classical/integrator.hpp"
#include "mfl/core/grid.hpp"
#include "mfl/core/profiles.hpp"
#include "mfl/core/test_panel.hpp"

namespace mfl::kinetic {

/// Monokinetic fluid (rho, u) carried by Lagrangian markers. Marker m starts at
/// label node y_m of `labels` with mass rho0(y_m) dV (normalized) and velocity
/// grad sigma(y_m). Per-marker arrays are row-major in the dimension.
struct DensityField {
  SpatialGrid labels;
  int dim = 1;
  double time = 0.0;
  std::vector<double> mass;
  std::vector<double> positions;
  std::vector<double> velocity;
  /// rho at the marker: rho0(y_m) / J_m, with rho0 normalized on the labels.
  std::vector<double> density;
  /// det of the deformation gradient dx/dy.
  std::vector<double> jacobian;
  /// deformation gradient G = dx/dy and its rate K = du/dy, d x d each.
  std::vector<double> deformation;
  std::vector<double> deformation_rate;
  /// Action sigma carried along the marker.
  std::vector<double> phase;

  int size() const { return static_cast<int>(mass.size()); }
  double label_volume() const { return labels.cell_volume(); }
  /// sum rho J dV; equals 1 up to round-off.
  double total_mass() const;
  double min_jacobian() const;
};

/// Labels on a midpoint grid over center +- box_sigmas * stddev per axis.
DensityField make_density_field(const GaussianDensity& rho0, const PhaseProfile& sigma, int markers_per_axis,
                                double box_sigmas = 8.0);

struct CausticReport {
  bool detected = false;
  /// Time of the step at which a marker Jacobian first fell to the threshold.
  double abort_time = -1.0;
  /// Linear extrapolation of that marker's Jacobian to zero.
  double estimated_time = -1.0;
  int marker = -1;
  double min_jacobian = 1.0;
  double threshold = 0.05;
  std::string message() const;
};

struct HydroOptions {
  classical::Scheme scheme = classical::Scheme::verlet;
  double caustic_threshold = 0.05;
  /// Track the action sigma (costs one extra pair sum per force evaluation).
  bool track_phase = true;
  /// Throw CausticError instead of returning the partial solution.
  bool throw_on_caustic = false;
  ThreadPool* pool = nullptr;
  const std::atomic<bool>* cancel = nullptr;
};

struct HydroResult {
  DensityField field;
  CausticReport caustic;
  int steps = 0;
  double dt = 0.0;
  bool completed() const { return !caustic.detected; }
};

/// x' = u, u' = E(x) = -sum_k m_k grad phi(x - x_k), deformation G' = K,
/// K' = grad E(x) G; stops at the first step where some det G <= threshold.
HydroResult hydro_lagrangian_solve(const DensityField& init, const TwoBodyPotential& phi, double t, double dt,
                                   const HydroOptions& options = {});

/// Runs until a caustic or t_max; returns the report (detected = false if none).
CausticReport find_caustic(const DensityField& init, const TwoBodyPotential& phi, double t_max, double dt,
                           const HydroOptions& options = {});

/// sum_m rho_m J_m dV F(x_m, u_m) = integral rho(x) F(x, u(x)) dx.
double monokinetic_pairing(const DensityField& field, const TestFunction& F);

/// Eulerian samples of a 1-D field: rho and u interpolated between markers
/// (zero outside the marker span), E from the marker quadrature.
struct EulerianSnapshot {
  std::vector<double> x, rho, u, E;
};
EulerianSnapshot sample_eulerian(const DensityField& field, const TwoBodyPotential& phi, const SpatialGrid& grid);

}  // namespace mfl::kinetic
