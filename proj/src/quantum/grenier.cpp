#include "mfl/quantum/grenier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mfl/core/errors.hpp"
#include "mfl/core/stepping.hpp"

namespace mfl::quantum {

std::vector<double> WKBFields::full_phase() const {
  std::vector<double> s(phase);
  for (int i = 0; i < size(); ++i) s[i] += drift * grid.coordinate(0, i);
  return s;
}

WaveField WKBFields::reconstruct() const {
  WaveField psi;
  psi.grid = grid;
  psi.h = h;
  psi.time = time;
  psi.values.resize(amplitude.size());
  const std::vector<double> s = full_phase();
  for (int i = 0; i < size(); ++i) psi.values[i] = amplitude[i] * std::polar(1.0, s[i] / h);
  return psi;
}

double WKBFields::amplitude_norm() const {
  double s = 0.0;
  for (const Complex& z : amplitude) s += std::norm(z);
  return std::sqrt(s * dx());
}

std::vector<double> WKBFields::gamma() const {
  std::vector<double> g(amplitude.size());
  for (size_t i = 0; i < g.size(); ++i) g[i] = std::norm(amplitude[i]);
  return g;
}

WKBFields make_wkb_fields(const AmplitudeProfile& a, const PhaseProfile& sigma, double h, const SpatialGrid& grid,
                          double safety) {
  if (sigma.curvature != 0.0) throw InvalidArgument("WKB fields need a periodic phase (zero curvature)");
  const double L = grid.extent(0);
  if (sigma.sine_amplitude != 0.0) {
    const double periods = sigma.sine_wavenumber * L / (2.0 * std::numbers::pi);
    if (std::abs(periods - std::round(periods)) > 1e-9)
      throw InvalidArgument("sine phase is not periodic on the WKB grid");
  }
  // Reuses the resolution and normalization checks of the wave initializer.
  const WaveField psi = wkb_initialize(a, sigma, h, grid, safety);
  WKBFields w;
  w.grid = grid;
  w.h = h;
  w.drift = sigma.drift_component(0);
  w.amplitude.resize(psi.size());
  w.phase.resize(psi.size());
  w.jacobian.assign(psi.size(), 1.0);
  double nrm = 0.0;
  for (int i = 0; i < psi.size(); ++i) {
    const double x = grid.coordinate(0, i);
    w.amplitude[i] = a.value(x);
    nrm += std::norm(w.amplitude[i]);
    w.phase[i] = sigma.periodic_part(x);
  }
  nrm = std::sqrt(nrm * grid.spacing(0));
  for (Complex& z : w.amplitude) z /= nrm;
  return w;
}

GrenierSolver::GrenierSolver(const TwoBodyPotential& phi, const SpatialGrid& grid, double h, bool include_h_term,
                             double caustic_threshold, double oscillation_tolerance)
    : grid_(grid), h_(h), h_term_(include_h_term), threshold_(caustic_threshold), osc_tol_(oscillation_tolerance),
      ops_(grid.points[0], grid.extent(0)), conv_(phi, grid) {
  if (!grid.periodic || grid.dim != 1) throw InvalidArgument("Grenier solver needs a periodic 1-D grid");
  if (!(h > 0.0)) throw InvalidArgument("h must be positive");
}

void GrenierSolver::rhs(double drift, const State& in, State& out) {
  const int n = grid_.points[0];
  std::vector<double> s1, s2;
  std::vector<Complex> a1, a2;
  ops_.derivatives(in.s, s1, s2);
  ops_.derivatives(in.a, a1, a2);
  std::vector<Complex> Jc(in.J.begin(), in.J.end()), Jd;
  ops_.derivative(Jc, Jd);
  rho_.resize(n);
  for (int i = 0; i < n; ++i) rho_[i] = std::norm(in.a[i]);
  conv_.apply(rho_, V_);
  out.a.resize(n);
  out.s.resize(n);
  out.J.resize(n);
  const Complex ih2(0.0, 0.5 * h_);
  for (int i = 0; i < n; ++i) {
    const double u = drift + s1[i], ux = s2[i];
    out.s[i] = -0.5 * u * u - V_[i];
    out.a[i] = -u * a1[i] - 0.5 * ux * in.a[i];
    if (h_term_) out.a[i] += ih2 * a2[i];
    out.J[i] = -u * Jd[i].real() + ux * in.J[i];
  }
}

double GrenierSolver::max_stable_dt(const WKBFields& w) {
  std::vector<double> s1, s2;
  ops_.derivatives(w.phase, s1, s2);
  double umax = 0.0;
  for (double s : s1) umax = std::max(umax, std::abs(w.drift + s));
  const double kmax = std::numbers::pi / w.dx();
  const double rate = umax * kmax + (h_term_ ? 0.5 * h_ * kmax * kmax : 0.0);
  // The three-stage scheme is stable on the imaginary axis up to sqrt(3).
  return rate > 0.0 ? 0.9 * std::sqrt(3.0) / rate : INFINITY;
}

void GrenierSolver::step(WKBFields& w, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("Grenier step needs dt > 0");
  const double limit = max_stable_dt(w);
  if (dt > limit)
    throw InvalidArgument("Grenier time step " + std::to_string(dt) + " exceeds the stability limit " +
                          std::to_string(limit));
  const int n = w.size();
  const double jmin_before = *std::min_element(w.jacobian.begin(), w.jacobian.end());
  State u0{w.amplitude, w.phase, w.jacobian}, k, u1, u2;
  rhs(w.drift, u0, k);
  u1 = u0;
  for (int i = 0; i < n; ++i) {
    u1.a[i] += dt * k.a[i];
    u1.s[i] += dt * k.s[i];
    u1.J[i] += dt * k.J[i];
  }
  rhs(w.drift, u1, k);
  u2 = u0;
  for (int i = 0; i < n; ++i) {
    u2.a[i] = 0.75 * u0.a[i] + 0.25 * (u1.a[i] + dt * k.a[i]);
    u2.s[i] = 0.75 * u0.s[i] + 0.25 * (u1.s[i] + dt * k.s[i]);
    u2.J[i] = 0.75 * u0.J[i] + 0.25 * (u1.J[i] + dt * k.J[i]);
  }
  rhs(w.drift, u2, k);
  for (int i = 0; i < n; ++i) {
    w.amplitude[i] = u0.a[i] / 3.0 + 2.0 / 3.0 * (u2.a[i] + dt * k.a[i]);
    w.phase[i] = u0.s[i] / 3.0 + 2.0 / 3.0 * (u2.s[i] + dt * k.s[i]);
    w.jacobian[i] = u0.J[i] / 3.0 + 2.0 / 3.0 * (u2.J[i] + dt * k.J[i]);
  }
  w.time += dt;

  for (int i = 0; i < n; ++i)
    if (!std::isfinite(w.phase[i]) || !std::isfinite(w.amplitude[i].real()) || !std::isfinite(w.amplitude[i].imag()))
      throw DivergenceError("WKB fields became non-finite at t=" + std::to_string(w.time), w.time);
  const double jmin = *std::min_element(w.jacobian.begin(), w.jacobian.end());
  const double rate = (jmin - jmin_before) / dt;
  const double est = rate < 0.0 ? w.time + jmin / -rate : w.time;
  if (jmin <= threshold_)
    throw CausticError("WKB Jacobian proxy fell to " + std::to_string(jmin) + " at t=" + std::to_string(w.time), w.time,
                       est);
  std::vector<double> s1, s2;
  ops_.derivatives(w.phase, s1, s2);
  const double frac = ops_.high_mode_fraction(s1);
  if (frac > osc_tol_)
    throw CausticError("grad sigma developed grid-scale oscillation at t=" + std::to_string(w.time) +
                           " (Jacobian proxy " + std::to_string(jmin) + ")",
                       w.time, est);
}

void GrenierSolver::evolve(WKBFields& w, double t, double dt, const std::atomic<bool>* cancel) {
  const int steps = uniform_steps(t, dt);
  if (steps == 0) return;
  const double h = t / steps, t0 = w.time;
  for (int k = 1; k <= steps; ++k) {
    if (cancel && cancel->load()) throw Cancelled();
    step(w, h);
    w.time = t0 + k * h;
  }
}

GrenierDiagnostics GrenierSolver::diagnostics(const WKBFields& w) {
  GrenierDiagnostics d;
  d.gamma = w.gamma();
  std::vector<Complex> a1, a2;
  ops_.derivatives(w.amplitude, a1, a2);
  d.commutator.resize(w.size());
  for (int i = 0; i < w.size(); ++i) d.commutator[i] = -h_ * (std::conj(w.amplitude[i]) * a2[i]).imag();
  std::vector<double> s1, s2;
  ops_.derivatives(w.phase, s1, s2);
  d.momentum.resize(w.size());
  for (int i = 0; i < w.size(); ++i) d.momentum[i] = w.drift + s1[i];
  d.min_jacobian = *std::min_element(w.jacobian.begin(), w.jacobian.end());
  d.high_mode_fraction = ops_.high_mode_fraction(s1);
  return d;
}

double GrenierSolver::amplitude_gradient_norm(const WKBFields& w) {
  std::vector<Complex> a1;
  ops_.derivative(w.amplitude, a1);
  double s = 0.0;
  for (const Complex& z : a1) s += std::norm(z);
  return std::sqrt(s * w.dx());
}

std::pair<double, double> GrenierSolver::phase_curvature(const WKBFields& w) {
  std::vector<double> s1, s2, s3;
  ops_.derivatives(w.phase, s1, s2);
  ops_.third_derivative(w.phase, s3);
  double m2 = 0.0, m3 = 0.0;
  for (int i = 0; i < w.size(); ++i) {
    m2 = std::max(m2, std::abs(s2[i]));
    m3 = std::max(m3, std::abs(s3[i]));
  }
  return {m2, m3};
}

WKBFields grenier_system_step(const WKBFields& w, const TwoBodyPotential& phi, double dt, bool include_h_term) {
  WKBFields out = w;
  GrenierSolver(phi, w.grid, w.h, include_h_term).step(out, dt);
  return out;
}

H1Track h1_norm_track(const WKBFields& w0, const TwoBodyPotential& phi, const std::vector<double>& times, double dt,
                      bool include_h_term) {
  GrenierSolver solver(phi, w0.grid, w0.h, include_h_term);
  WKBFields w = w0;
  H1Track tr;
  double rate_bound = 0.0;
  auto sample = [&] {
    const double n = solver.amplitude_gradient_norm(w);
    const auto [m2, m3] = solver.phase_curvature(w);
    tr.times.push_back(w.time);
    tr.norms.push_back(n);
    tr.sigma_xx_sup.push_back(m2);
    tr.sigma_xxx_sup.push_back(m3);
    rate_bound = std::max(rate_bound, m2 + (n > 0.0 ? m3 / (2.0 * n) : 0.0));
  };
  const double t0 = w.time;
  sample();
  for (double t : times) {
    if (t < w.time - t0 - 1e-12) throw InvalidArgument("h1_norm_track needs increasing times");
    solver.evolve(w, t - (w.time - t0), dt);
    if (t == 0.0) continue;
    sample();
  }
  for (size_t k = 1; k < tr.times.size(); ++k) {
    const double t = tr.times[k] - tr.times[0];
    if (t <= 0.0) continue;
    const double growth = std::log(tr.norms[k] / tr.norms[0]);
    tr.fitted_rate = std::max(tr.fitted_rate, growth / t);
    if (growth > t * rate_bound + 1e-12) tr.gronwall_ok = false;
  }
  return tr;
}

}  // namespace mfl::quantum
