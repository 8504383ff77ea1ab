#include "mfl/kinetic/hydro.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mfl/classical/flow.hpp"
#include "mfl/classical/pair_kernels.hpp"
#include "mfl/core/errors.hpp"

namespace mfl::kinetic {

namespace {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double det_small(const double* m, int d) {
  switch (d) {
    case 1: return m[0];
    case 2: return m[0] * m[3] - m[1] * m[2];
    default:
      return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
             m[2] * (m[3] * m[7] - m[4] * m[6]);
  }
}

// d/dt det G = det G tr(G^{-1} K)
double det_rate(const double* G, const double* K, int d) {
  Eigen::Map<const Mat> g(G, d, d), k(K, d, d);
  return g.determinant() * (g.inverse() * k).trace();
}

}  // namespace

double DensityField::total_mass() const {
  double s = 0.0;
  for (int m = 0; m < size(); ++m) s += density[m] * jacobian[m];
  return s * label_volume();
}

double DensityField::min_jacobian() const {
  return jacobian.empty() ? 1.0 : *std::min_element(jacobian.begin(), jacobian.end());
}

DensityField make_density_field(const GaussianDensity& rho0, const PhaseProfile& sigma, int n,
                                double box_sigmas) {
  rho0.validate();
  if (!(box_sigmas > 0.0)) throw InvalidArgument("label box must be positive");
  const int d = rho0.dim();
  SpatialGrid labels;
  labels.dim = d;
  for (int a = 0; a < d; ++a) {
    const double R = box_sigmas * rho0.stddev[a], h = 2.0 * R / n;
    labels.lower.push_back(rho0.center[a] - R + 0.5 * h);
    labels.upper.push_back(rho0.center[a] + R + 0.5 * h);
    labels.points.push_back(n);
  }
  labels.validate();

  DensityField f;
  f.labels = labels;
  f.dim = d;
  const size_t M = labels.size();
  f.mass.resize(M);
  f.positions.resize(M * d);
  f.velocity.resize(M * d);
  f.density.resize(M);
  f.jacobian.assign(M, 1.0);
  f.deformation.assign(M * d * d, 0.0);
  f.deformation_rate.resize(M * d * d);
  f.phase.resize(M);
  const double dV = labels.cell_volume();
  double total = 0.0;
  for (size_t m = 0; m < M; ++m) {
    std::span<double> x(f.positions.data() + m * d, d);
    labels.node(m, x.data());
    f.mass[m] = rho0.pdf(x) * dV;
    total += f.mass[m];
    sigma.gradient(x, std::span<double>(f.velocity.data() + m * d, d));
    sigma.hessian(x, std::span<double>(f.deformation_rate.data() + m * d * d, d * d));
    for (int a = 0; a < d; ++a) f.deformation[m * d * d + a * d + a] = 1.0;
    f.phase[m] = sigma.value(x);
  }
  if (std::abs(total / rho0.mass - 1.0) > 1e-8)
    throw InvalidArgument("label box too small: density quadrature misses " + std::to_string(1.0 - total / rho0.mass));
  for (size_t m = 0; m < M; ++m) {
    f.mass[m] /= total;
    f.density[m] = f.mass[m] / dV;
  }
  return f;
}

std::string CausticReport::message() const {
  std::ostringstream os;
  if (!detected) return "no caustic";
  os << "caustic: marker " << marker << " Jacobian " << min_jacobian << " <= " << threshold << " at t="
     << abort_time << " (extrapolated crossing t=" << estimated_time << ")";
  return os.str();
}

HydroResult hydro_lagrangian_solve(const DensityField& init, const TwoBodyPotential& phi, double t, double dt,
                                   const HydroOptions& opt) {
  if (phi.dim() != init.dim) throw InvalidArgument("potential and field dimensions differ");
  HydroResult r;
  r.steps = classical::step_count(t, dt);
  r.dt = r.steps ? t / r.steps : dt;
  r.caustic.threshold = opt.caustic_threshold;
  r.field = init;
  DensityField& f = r.field;
  const int d = f.dim, M = f.size(), dd = d * d;
  const double t0 = f.time;
  const bool force = !phi.is_zero_force();

  std::vector<double> E(M * d, 0.0), gradE(M * dd, 0.0), V(M, 0.0), tmp(dd);
  auto evaluate = [&] {
    if (force) {
      kernels::field(phi, d, f.positions, f.positions, f.mass, E, opt.pool);
      kernels::field_jacobian(phi, d, f.positions, f.positions, f.mass, gradE, opt.pool);
    }
    if (opt.track_phase) kernels::potential(phi, d, f.positions, f.positions, f.mass, V, opt.pool);
  };
  // K += h grad E G
  auto kick = [&](double h) {
    for (int m = 0; m < M; ++m) {
      for (int a = 0; a < d; ++a) f.velocity[m * d + a] += h * E[m * d + a];
      if (!force) continue;
      const double* A = &gradE[m * dd];
      const double* G = &f.deformation[m * dd];
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          double s = 0.0;
          for (int c = 0; c < d; ++c) s += A[a * d + c] * G[c * d + b];
          f.deformation_rate[m * dd + a * d + b] += h * s;
        }
    }
  };

  evaluate();
  for (int k = 1; k <= r.steps; ++k) {
    if (opt.cancel && opt.cancel->load()) throw Cancelled();
    for (double frac : classical::scheme_fractions(opt.scheme)) {
      const double h = frac * r.dt;
      kick(0.5 * h);
      if (opt.track_phase)
        for (int m = 0; m < M; ++m) {
          double u2 = 0.0;
          for (int a = 0; a < d; ++a) u2 += f.velocity[m * d + a] * f.velocity[m * d + a];
          // Discrete action of the kick-drift-kick step.
          f.phase[m] += h * (0.5 * u2 - 0.5 * V[m]);
        }
      for (int q = 0; q < M * d; ++q) f.positions[q] += h * f.velocity[q];
      for (int q = 0; q < M * dd; ++q) f.deformation[q] += h * f.deformation_rate[q];
      evaluate();
      if (opt.track_phase)
        for (int m = 0; m < M; ++m) f.phase[m] -= 0.5 * h * V[m];
      kick(0.5 * h);
    }
    f.time = t0 + k * r.dt;

    int worst = -1;
    double jmin = INFINITY;
    for (int m = 0; m < M; ++m) {
      f.jacobian[m] = det_small(&f.deformation[m * dd], d);
      if (f.jacobian[m] < jmin) {
        jmin = f.jacobian[m];
        worst = m;
      }
    }
    for (int q = 0; q < M * d; ++q)
      if (!std::isfinite(f.positions[q]) || !std::isfinite(f.velocity[q]))
        throw DivergenceError("hydro markers diverged at t=" + std::to_string(f.time), f.time);
    for (int m = 0; m < M; ++m) f.density[m] = f.mass[m] / (f.jacobian[m] * f.label_volume());
    if (jmin <= opt.caustic_threshold) {
      auto& c = r.caustic;
      c.detected = true;
      c.abort_time = f.time;
      c.marker = worst;
      c.min_jacobian = jmin;
      const double rate = det_rate(&f.deformation[worst * dd], &f.deformation_rate[worst * dd], d);
      c.estimated_time = rate < 0.0 ? f.time + jmin / -rate : f.time;
      r.steps = k;
      if (opt.throw_on_caustic) throw CausticError(c.message(), c.abort_time, c.estimated_time);
      return r;
    }
  }
  return r;
}

CausticReport find_caustic(const DensityField& init, const TwoBodyPotential& phi, double t_max, double dt,
                           const HydroOptions& options) {
  HydroOptions o = options;
  o.throw_on_caustic = false;
  o.track_phase = false;
  return hydro_lagrangian_solve(init, phi, t_max, dt, o).caustic;
}

double monokinetic_pairing(const DensityField& f, const TestFunction& F) {
  const int d = f.dim;
  double acc = 0.0;
  for (int m = 0; m < f.size(); ++m)
    acc += f.density[m] * f.jacobian[m] *
           F(std::span<const double>(f.positions.data() + m * d, d), std::span<const double>(f.velocity.data() + m * d, d));
  return acc * f.label_volume();
}

EulerianSnapshot sample_eulerian(const DensityField& f, const TwoBodyPotential& phi, const SpatialGrid& grid) {
  if (f.dim != 1 || grid.dim != 1) throw InvalidArgument("Eulerian sampling is implemented for d = 1");
  const int M = f.size();
  std::vector<int> order(M);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return f.positions[a] < f.positions[b]; });
  EulerianSnapshot s;
  s.x = grid.axis_nodes(0);
  const size_t n = s.x.size();
  s.rho.assign(n, 0.0);
  s.u.assign(n, 0.0);
  s.E.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const double x = s.x[i];
    auto it = std::lower_bound(order.begin(), order.end(), x, [&](int m, double v) { return f.positions[m] < v; });
    if (it == order.begin() || it == order.end()) continue;
    const int hi = *it, lo = *(it - 1);
    const double w = (x - f.positions[lo]) / (f.positions[hi] - f.positions[lo]);
    s.rho[i] = (1 - w) * f.density[lo] + w * f.density[hi];
    s.u[i] = (1 - w) * f.velocity[lo] + w * f.velocity[hi];
  }
  kernels::field(phi, 1, s.x, f.positions, f.mass, s.E);
  return s;
}

}  // namespace mfl::kinetic
