#pragma once

#include <atomic>
#include <vector>

#include "mfl/quantum/wave.hpp"

namespace mfl::quantum {

/// psi = a exp(i sigma / h) with sigma = drift x + phase, phase periodic on the
/// grid. The jacobian field J transports the Lagrangian Jacobian in Eulerian
/// form (J_t + sigma' J' = sigma'' J) and flags caustics.
struct WKBFields {
  SpatialGrid grid;
  double h = 1.0;
  double time = 0.0;
  double drift = 0.0;
  std::vector<Complex> amplitude;
  std::vector<double> phase;
  std::vector<double> jacobian;

  int size() const { return static_cast<int>(amplitude.size()); }
  double dx() const { return grid.spacing(0); }
  /// sigma on the grid, drift included.
  std::vector<double> full_phase() const;
  WaveField reconstruct() const;
  double amplitude_norm() const;
  /// Gamma = |a|^2.
  std::vector<double> gamma() const;
};

/// The sine part of sigma must be periodic on the grid and the curvature zero.
WKBFields make_wkb_fields(const AmplitudeProfile& a, const PhaseProfile& sigma, double h, const SpatialGrid& grid,
                          double safety = 0.5);

struct GrenierDiagnostics {
  std::vector<double> gamma;
  /// B = (i h / 2)(conj(a) a'' - a conj(a)'') = -h Im(conj(a) a'').
  std::vector<double> commutator;
  std::vector<double> momentum;
  double min_jacobian = 1.0;
  double high_mode_fraction = 0.0;
};

/// sigma_t + sigma'^2/2 + phi * |a|^2 = 0,
/// a_t + sigma' a' + a sigma''/2 = i (h/2) a''   (right side only with include_h_term),
/// advanced by the three-stage strong-stability-preserving Runge-Kutta scheme
/// with spectral derivatives.
class GrenierSolver {
public:
  GrenierSolver(const TwoBodyPotential& phi, const SpatialGrid& grid, double h, bool include_h_term,
                double caustic_threshold = 0.05, double oscillation_tolerance = 1e-6);

  /// Throws CausticError when min J <= threshold or grad sigma develops
  /// grid-scale content; InvalidArgument when dt exceeds the stability limit.
  void step(WKBFields& w, double dt);
  void evolve(WKBFields& w, double t, double dt, const std::atomic<bool>* cancel = nullptr);
  double max_stable_dt(const WKBFields& w);
  GrenierDiagnostics diagnostics(const WKBFields& w);
  /// ||a'||_{L2}
  double amplitude_gradient_norm(const WKBFields& w);
  /// sup |sigma''| and sup |sigma'''|.
  std::pair<double, double> phase_curvature(const WKBFields& w);

private:
  struct State {
    std::vector<Complex> a;
    std::vector<double> s, J;
  };
  void rhs(double drift, const State& in, State& out);

  SpatialGrid grid_;
  double h_;
  bool h_term_;
  double threshold_;
  double osc_tol_;
  SpectralOps ops_;
  PeriodicConvolver conv_;
  std::vector<double> V_, rho_;
};

WKBFields grenier_system_step(const WKBFields& w, const TwoBodyPotential& phi, double dt, bool include_h_term);

struct H1Track {
  std::vector<double> times;
  std::vector<double> norms;
  std::vector<double> sigma_xx_sup;
  std::vector<double> sigma_xxx_sup;
  /// max over t > 0 of log(norm(t)/norm(0)) / t, floored at 0.
  double fitted_rate = 0.0;
  /// log(norm(t)/norm(0)) <= t * max_s (sup|sigma''| + sup|sigma'''| / (2 norm)) at every sample.
  bool gronwall_ok = true;
};

/// ||a'||_{L2} at the requested (increasing) times.
H1Track h1_norm_track(const WKBFields& w0, const TwoBodyPotential& phi, const std::vector<double>& times, double dt,
                      bool include_h_term);

}  // namespace mfl::quantum
