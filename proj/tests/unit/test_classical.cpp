#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <random>

#include "doctest.h"
#include "mfl/classical/flow.hpp"
#include "mfl/classical/integrator.hpp"
#include "mfl/classical/monokinetic.hpp"
#include "mfl/classical/pairing.hpp"
#include "mfl/classical/sensitivity.hpp"
#include "mfl/classical/tangent.hpp"

using namespace mfl;
using namespace mfl::classical;

namespace {

EnsembleState random_state(int n, int d, std::uint64_t seed, double vscale = 0.5) {
  auto s = EnsembleState::uniform(n, d);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (double& x : s.positions) x = g(rng);
  for (double& v : s.velocities) v = vscale * g(rng);
  return s;
}

EnsembleState pair(double x1, double x2, double v1, double v2) {
  auto s = EnsembleState::uniform(2, 1);
  s.positions = {x1, x2};
  s.velocities = {v1, v2};
  return s;
}

const GaussianDensity rho0 = GaussianDensity::isotropic(1, 0.0, std::sqrt(0.5));

EnsembleState mono(int n, const PhaseProfile& sigma, InitMode mode = InitMode::quantile) {
  MonokineticOptions o;
  o.mode = mode;
  return monokinetic_init(rho0, sigma, n, o);
}

// least-squares slope of log y against log x
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]), my += std::log(y[i]);
  mx /= x.size(), my /= y.size();
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my), sxx += dx * dx;
  }
  return sxy / sxx;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("mean-field force") {
  const auto s = random_state(8, 1, 1);
  for (double a : mean_field_force(s, TwoBodyPotential::zero(1))) CHECK(a == 0.0);
  const auto a = mean_field_force(pair(1.0, 0.0, 0.0, 0.0), TwoBodyPotential::harmonic(1, 1.0));
  CHECK(a[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(a[1] == doctest::Approx(0.5).epsilon(1e-15));

  // a_i = -dH/dx_i with H = sum |v|^2/2 + (1/N) sum_{i<j} phi
  for (int d = 1; d <= 3; ++d) {
    const auto phi = TwoBodyPotential::gaussian(d, 1.0, 1.0);
    auto st = random_state(8, d, 10 + d);
    const auto acc = mean_field_force(st, phi);
    double scale = 0.0;
    for (double x : acc) scale = std::max(scale, std::abs(x));
    for (size_t k = 0; k < st.positions.size(); ++k) {
      auto p = st, m = st;
      p.positions[k] += 1e-5;
      m.positions[k] -= 1e-5;
      const double fd = -(total_energy(p, phi) - total_energy(m, phi)) / 2e-5;
      CHECK(std::abs(fd - acc[k]) <= 1e-6 * scale);
    }
  }
}

TEST_CASE("total energy examples") {
  auto s = random_state(6, 2, 3);
  std::fill(s.velocities.begin(), s.velocities.end(), 0.0);
  CHECK(total_energy(s, TwoBodyPotential::zero(2)) == 0.0);
  CHECK(total_energy(pair(1.0, 0.0, 1.0, 0.0), TwoBodyPotential::harmonic(1, 1.0)) ==
        doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("symplectic step: free streaming, reversibility, harmonic pair") {
  const auto s = random_state(16, 2, 5);
  const auto free = step_symplectic(s, TwoBodyPotential::zero(2), 0.1);
  for (size_t k = 0; k < s.positions.size(); ++k) {
    CHECK(free.positions[k] == doctest::Approx(s.positions[k] + 0.1 * s.velocities[k]).epsilon(1e-15));
    CHECK(free.velocities[k] == s.velocities[k]);
  }
  const auto phi = TwoBodyPotential::gaussian(2, 1.0, 1.0);
  const auto fwd = step_symplectic(s, phi, 0.05);
  const auto back = step_symplectic(fwd, phi, -0.05);
  CHECK(sup_diff(back.positions, s.positions) < 1e-14);
  CHECK(sup_diff(back.velocities, s.velocities) < 1e-14);

  // Local error of one Verlet step on the harmonic pair is O(dt^3).
  const auto harm = TwoBodyPotential::harmonic(1, 1.0);
  auto local = [&](double dt) {
    const auto p = step_symplectic(pair(1.0, 0.0, 0.3, -0.1), harm, dt);
    const double r = 1.0 * std::cos(dt) + 0.4 * std::sin(dt);
    return std::abs((p.positions[0] - p.positions[1]) - r);
  };
  CHECK(std::log2(local(0.1) / local(0.05)) == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("flow: free flow and harmonic pair closed forms") {
  const auto s = random_state(10, 3, 9);
  const auto r = flow(s, TwoBodyPotential::zero(3), 2.0, 0.1);
  for (size_t k = 0; k < s.positions.size(); ++k)
    CHECK(r.final_state.positions[k] == doctest::Approx(s.positions[k] + 2.0 * s.velocities[k]).epsilon(1e-13));

  for (Scheme sc : {Scheme::verlet, Scheme::yoshida4}) {
    FlowOptions o;
    o.scheme = sc;
    const double t = 3.0;
    const auto h = flow(pair(1.0, -0.5, 0.3, -0.1), TwoBodyPotential::harmonic(1, 1.0), t, 0.001, o);
    const double exact = 1.5 * std::cos(t) + 0.4 * std::sin(t);
    const double r = h.final_state.positions[0] - h.final_state.positions[1];
    CHECK(std::abs(r - exact) < (sc == Scheme::verlet ? 1e-6 : 1e-12));
    // centre of mass streams freely
    CHECK(h.final_state.positions[0] + h.final_state.positions[1] == doctest::Approx(0.5 + 0.2 * t).epsilon(1e-12));
  }
}

TEST_CASE("flow matches an adaptive Runge-Kutta reference for N = 64") {
  namespace ode = boost::numeric::odeint;
  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const int n = 64;
  const auto s0 = mono(n, PhaseProfile::sine(0.2, 1.0));
  // Independent right-hand side: direct O(N^2) loop over the closed-form kernel.
  auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy, double) {
    for (int i = 0; i < n; ++i) {
      dy[i] = y[n + i];
      double a = 0.0;
      for (int j = 0; j < n; ++j) {
        const double r = y[i] - y[j];
        a += r * std::exp(-0.5 * r * r);  // -grad phi(r) = r exp(-r^2/2)
      }
      dy[n + i] = a / n;
    }
  };
  std::vector<double> y(2 * n);
  for (int i = 0; i < n; ++i) y[i] = s0.positions[i], y[n + i] = s0.velocities[i];
  ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<std::vector<double>>>(1e-13, 1e-13), rhs, y,
                          0.0, 1.0, 1e-3);
  std::vector<double> xr(y.begin(), y.begin() + n), vr(y.begin() + n, y.end());
  for (Scheme sc : {Scheme::verlet, Scheme::yoshida4}) {
    FlowOptions o;
    o.scheme = sc;
    const auto r = flow(s0, phi, 1.0, 1e-3, o);
    CAPTURE(to_string(sc));
    CHECK(std::max(sup_diff(r.final_state.positions, xr), sup_diff(r.final_state.velocities, vr)) <= 1e-6);
  }
}

TEST_CASE("energy drift is second order for Verlet and recorded along the flow") {
  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const auto s0 = mono(64, PhaseProfile::sine(0.2, 1.0));
  const auto a = flow(s0, phi, 2.0, 0.04), b = flow(s0, phi, 2.0, 0.02);
  CHECK(a.energy.size() == static_cast<size_t>(a.steps + 1));
  const double p = std::log2(a.max_energy_drift() / b.max_energy_drift());
  CHECK(p >= 1.8);
  CHECK(p <= 2.2);
}

TEST_CASE("empirical pairings and the weak Vlasov identity") {
  auto s = random_state(32, 1, 21);
  CHECK(empirical_pairing(s, constant_function(1)) == doctest::Approx(1.0).epsilon(1e-15));
  std::fill(s.velocities.begin(), s.velocities.end(), 0.37);
  CHECK(empirical_pairing(s, velocity_function(1)) == doctest::Approx(0.37).epsilon(1e-14));

  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const auto s0 = random_state(64, 1, 22);
  const double t = 0.5, dt = 1e-3;
  FlowOptions o;
  o.scheme = Scheme::yoshida4;
  o.track_energy = false;
  const auto mid = flow(s0, phi, t, dt, o).final_state;
  const double tau = 1e-3;
  const auto plus = flow(mid, phi, tau, dt, o).final_state;
  // backward in time by reversing velocities (time-reversal symmetry)
  auto rev = mid;
  for (double& v : rev.velocities) v = -v;
  auto minus = flow(rev, phi, tau, dt, o).final_state;
  for (double& v : minus.velocities) v = -v;
  for (const auto& F : default_test_panel(1)) {
    const double lhs = (empirical_pairing(plus, F) - empirical_pairing(minus, F)) / (2 * tau);
    CHECK(std::abs(lhs - weak_vlasov_rhs(mid, phi, F)) < 1e-6);
  }
}

TEST_CASE("monokinetic initialization") {
  for (double v : mono(64, PhaseProfile::zero()).velocities) CHECK(v == 0.0);
  for (double v : mono(64, PhaseProfile::linear({0.8})).velocities) CHECK(v == doctest::Approx(0.8).epsilon(1e-15));
  const auto s = mono(256, PhaseProfile::sine(0.2, 1.0), InitMode::quadrature);
  CHECK(s.total_weight() == doctest::Approx(1.0).epsilon(1e-12));
  // Oracle: composite Simpson on [-8, 8] with 40001 nodes.
  const int m = 40000;
  const double lo = -8.0, hi = 8.0, step = (hi - lo) / m;
  for (const auto& F : default_test_panel(1)) {
    double q = 0.0;
    for (int k = 0; k <= m; ++k) {
      const double x = lo + k * step;
      const double w = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      q += w * std::exp(-x * x) / std::sqrt(M_PI) * F(x, 0.2 * std::cos(x));
    }
    q *= step / 3.0;
    CHECK(std::abs(empirical_pairing(s, F) - q) < 1e-10);
  }
}

TEST_CASE("tangent flow: free flow, harmonic pair, finite differences") {
  const auto s = random_state(8, 1, 4);
  {
    const auto b = sensitivity_blocks(s, TwoBodyPotential::zero(1), PhaseProfile::zero(), 1.5, 0.01, {0, 3});
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(8, 8);
    CHECK((b.position.col(0) - I.col(0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((b.position.col(1) - I.col(3)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(b.momentum.cwiseAbs().maxCoeff() == 0.0);
    CHECK(b.max_off_diagonal() == 0.0);
  }
  {
    // t = 0: identity position block, Hess sigma on the momentum diagonal.
    const auto sig = PhaseProfile::sine(0.2, 1.0);
    const auto b = sensitivity_blocks(s, TwoBodyPotential::gaussian(1, 1.0, 1.0), sig, 0.0, 0.01, {2});
    CHECK(b.position(2, 0) == 1.0);
    CHECK(b.momentum(2, 0) == doctest::Approx(-0.2 * std::sin(s.positions[2])).epsilon(1e-14));
    CHECK(std::abs(b.momentum(1, 0)) == 0.0);
  }
  {
    // harmonic pair, unit perturbation of x_1(0): x1 = X + r/2, r'' = -r
    const double t = 2.0;
    FlowOptions o;
    o.scheme = Scheme::yoshida4;
    Eigen::MatrixXd dX0 = Eigen::MatrixXd::Zero(2, 1), dV0 = Eigen::MatrixXd::Zero(2, 1);
    dX0(0, 0) = 1.0;
    const auto r = propagate_tangent(pair(1.0, 0.0, 0.2, 0.0), TwoBodyPotential::harmonic(1, 1.0), t, 0.001, dX0, dV0, o);
    CHECK(r.dX(0, 0) == doctest::Approx(0.5 + 0.5 * std::cos(t)).epsilon(1e-10));
    CHECK(r.dX(1, 0) == doctest::Approx(0.5 - 0.5 * std::cos(t)).epsilon(1e-10));
    CHECK(r.dV(0, 0) == doctest::Approx(-0.5 * std::sin(t)).epsilon(1e-10));
    CHECK(r.dV(1, 0) == doctest::Approx(0.5 * std::sin(t)).epsilon(1e-10));
  }
  {
    // slaved blocks at N = 8 against nudged re-runs
    const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
    const auto sig = PhaseProfile::sine(0.2, 1.0);
    const auto s0 = mono(8, sig);
    const double t = 1.0, dt = 0.01, eps = 1e-6;
    const auto b = sensitivity_blocks(s0, phi, sig, t, dt, {0, 1, 2, 3, 4, 5, 6, 7});
    FlowOptions o;
    o.track_energy = false;
    double worst = 0.0;
    for (int j = 0; j < 8; ++j) {
      auto p = s0, m = s0;
      p.positions[j] += eps, m.positions[j] -= eps;
      double xp = p.positions[j], xm = m.positions[j], gp, gm;
      sig.gradient({&xp, 1}, {&gp, 1});
      sig.gradient({&xm, 1}, {&gm, 1});
      p.velocities[j] = gp, m.velocities[j] = gm;
      const auto fp = flow(p, phi, t, dt, o).final_state, fm = flow(m, phi, t, dt, o).final_state;
      for (int i = 0; i < 8; ++i) {
        const double dx = (fp.positions[i] - fm.positions[i]) / (2 * eps);
        const double dv = (fp.velocities[i] - fm.velocities[i]) / (2 * eps);
        worst = std::max(worst, std::abs(b.position(i, j) - dx) / std::max(std::abs(dx), 1e-3));
        worst = std::max(worst, std::abs(b.momentum(i, j) - dv) / std::max(std::abs(dv), 1e-3));
      }
    }
    CHECK(worst <= 1e-4);
  }
}

TEST_CASE("off-diagonal sensitivities scale like 1/N") {
  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const auto sig = PhaseProfile::sine(0.2, 1.0);
  std::vector<double> ns, off, pull;
  for (int n : {8, 32, 128}) {
    const auto s0 = mono(n, sig);
    const std::vector<int> idx{n / 4, n / 2, 3 * n / 4};
    ns.push_back(n);
    off.push_back(sensitivity_blocks(s0, phi, sig, 1.0, 0.01, idx).max_off_diagonal());
    pull.push_back(pullback_momentum_sensitivity(s0, phi, sig, 1.0, 0.5, 0.01, idx).max_off_diagonal());
  }
  CHECK(std::abs(loglog_slope(ns, off) + 1.0) <= 0.15);
  CHECK(std::abs(loglog_slope(ns, pull) + 1.0) <= 0.15);
}

TEST_CASE("pullback sensitivities") {
  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const auto sig = PhaseProfile::sine(0.2, 1.0);
  const auto s0 = mono(16, sig);
  const auto full = sensitivity_blocks(s0, phi, sig, 1.0, 0.01, {3, 8});
  const auto at0 = pullback_momentum_sensitivity(s0, phi, sig, 1.0, 0.0, 0.01, {3, 8});
  CHECK((full.momentum - at0.momentum).cwiseAbs().maxCoeff() < 1e-12);
  const auto zero = pullback_momentum_sensitivity(s0, TwoBodyPotential::zero(1), PhaseProfile::zero(), 1.0, 0.5, 0.01, {3, 8});
  CHECK(zero.momentum.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("flow Jacobian bounds: identity, Liouville, free caustic") {
  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const auto sig = PhaseProfile::sine(0.2, 1.0);
  const auto s0 = mono(16, sig);
  const auto j0 = flow_jacobian_bounds(s0, phi, sig, 0.0, 0.01);
  for (double d : j0.diagonal_dets) CHECK(d == 1.0);
  CHECK(j0.phase_space_det == doctest::Approx(1.0).epsilon(1e-15));
  for (double t : {0.5, 2.0}) {
    const auto j = flow_jacobian_bounds(s0, phi, sig, t, 0.01);
    CHECK(j.max_liouville_error <= 1e-6);
  }
  // sigma = -x^2/2, free, N = 1: x(t) = x0 (1 - t)
  auto one = EnsembleState::uniform(1, 1);
  one.positions = {0.7};
  one.velocities = {-0.7};
  const auto half = flow_jacobian_bounds(one, TwoBodyPotential::zero(1), PhaseProfile::quadratic(-1.0), 0.5, 0.001);
  CHECK(half.diagonal_dets[0] == doctest::Approx(0.5).epsilon(1e-12));
  const auto c = flow_jacobian_bounds(one, TwoBodyPotential::zero(1), PhaseProfile::quadratic(-1.0), 1.5, 0.001);
  CHECK(c.caustic);
  // det = 1 - t first reaches the threshold at t = 1 - threshold
  CHECK(c.caustic_time == doctest::Approx(1.0 - kCausticThreshold).epsilon(1e-9));
  const auto near = flow_jacobian_bounds(one, TwoBodyPotential::zero(1), PhaseProfile::quadratic(-1.0), 0.999, 0.001);
  CHECK(near.min_over_trajectory == doctest::Approx(0.001).epsilon(1e-6));
}
