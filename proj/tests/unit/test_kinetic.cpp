#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mfl/classical/flow.hpp"
#include "mfl/classical/monokinetic.hpp"
#include "mfl/classical/pairing.hpp"
#include "mfl/core/errors.hpp"
#include "mfl/kinetic/field.hpp"
#include "mfl/kinetic/hydro.hpp"
#include "mfl/kinetic/vlasov.hpp"

using namespace mfl;
using namespace mfl::kinetic;
using std::numbers::pi;

namespace {

const GaussianDensity rho0 = GaussianDensity::isotropic(1, 0.0, std::sqrt(0.5));

/// Non-periodic grid whose nodes run symmetrically from -half to +half.
SpatialGrid symmetric_line(double half, int n) {
  const double s = 2.0 * half / (n - 1);
  return SpatialGrid::line(-half, -half + n * s, n, false);
}

GridDensity gaussian_density(const SpatialGrid& g, double s) {
  GridDensity r{g, {}};
  double total = 0.0;
  for (int i = 0; i < g.points[0]; ++i) {
    const double x = g.coordinate(0, i);
    r.values.push_back(std::exp(-x * x / (2 * s * s)));
    total += r.values.back() * g.spacing(0);
  }
  for (double& v : r.values) v /= total;
  return r;
}

PhaseSpaceCloud mono_cloud(int n, const PhaseProfile& sigma) {
  classical::MonokineticOptions o;
  o.mode = classical::InitMode::quadrature;
  return PhaseSpaceCloud::from_ensemble(classical::monokinetic_init(rho0, sigma, n, o));
}

double evaluate(const ForceFieldCache& E, double x) {
  double out = 0.0;
  E.evaluate({&x, 1}, {&out, 1});
  return out;
}

}  // namespace

TEST_CASE("self-consistent field: constant potential, point-like density, odd symmetry") {
  const auto g = symmetric_line(8.0, 1024);
  const auto rho = gaussian_density(g, 0.7);
  const auto Ec = self_consistent_field(rho, TwoBodyPotential::constant(1, 3.0));
  for (double e : Ec.field) CHECK(e == 0.0);

  // narrow density of width 4 dx: E -> -grad phi
  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const auto narrow = gaussian_density(g, 4.0 * g.spacing(0));
  const auto En = self_consistent_field(narrow, phi);
  double err = 0.0, scale = 0.0;
  for (double x = -4.0; x <= 4.0; x += 0.05) {
    double gx = 0.0;
    phi.gradient({&x, 1}, {&gx, 1});
    err = std::max(err, std::abs(evaluate(En, x) + gx));
    scale = std::max(scale, std::abs(gx));
  }
  CHECK(err <= 0.01 * scale);

  const auto E = self_consistent_field(rho, phi);
  CHECK(std::abs(evaluate(E, 0.0)) <= 1e-10);
  for (double x = 0.1; x < 5.0; x += 0.3) CHECK(std::abs(evaluate(E, x) + evaluate(E, -x)) <= 1e-10);

  // width below two spacings is rejected
  CHECK_THROWS_AS(self_consistent_field(rho, TwoBodyPotential::gaussian(1, 1.0, 1.5 * g.spacing(0))), ResolutionError);
}

TEST_CASE("cloud field of a symmetric cloud is odd") {
  const auto cloud = mono_cloud(512, PhaseProfile::zero());
  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const auto E = self_consistent_field(cloud, phi, symmetric_line(8.0, 1025));
  CHECK(std::abs(evaluate(E, 0.0)) <= 1e-10);
  CHECK(std::abs(evaluate(E, 0.8) + evaluate(E, -0.8)) <= 1e-10);
}

TEST_CASE("Vlasov step: free streaming, no self force, weights untouched") {
  auto cloud = mono_cloud(256, PhaseProfile::sine(0.2, 1.0));
  const auto c0 = cloud;
  const auto g = symmetric_line(12.0, 1024);
  VlasovSolver free(TwoBodyPotential::zero(1), g);
  for (int k = 0; k < 10; ++k) free.advance(cloud, 0.1);
  for (int i = 0; i < cloud.count; ++i) {
    CHECK(cloud.positions[i] == doctest::Approx(c0.positions[i] + 1.0 * c0.velocities[i]).epsilon(1e-13));
    CHECK(cloud.velocities[i] == c0.velocities[i]);
  }
  for (const auto& F : default_test_panel(1)) {
    // f(t) = f0(x - v t, v)
    double exact = 0.0;
    for (int i = 0; i < c0.count; ++i)
      exact += c0.weights[i] * F(c0.positions[i] + c0.velocities[i], c0.velocities[i]);
    CHECK(cloud_pairing(cloud, F) == doctest::Approx(exact).epsilon(1e-12));
  }

  PhaseSpaceCloud one;
  one.count = 1;
  one.positions = {0.3};
  one.velocities = {0.5};
  one.weights = {1.0};
  const auto moved = vlasov_step(one, TwoBodyPotential::gaussian(1, 1.0, 1.0), g, 0.2);
  CHECK(moved.positions[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(moved.velocities[0] == doctest::Approx(0.5).epsilon(1e-12));

  auto c = mono_cloud(256, PhaseProfile::sine(0.2, 1.0));
  const auto w0 = c.weights;
  VlasovSolver s(TwoBodyPotential::gaussian(1, 1.0, 1.0), g);
  for (int k = 0; k < 20; ++k) s.advance(c, 0.05);
  CHECK(c.weights == w0);
  CHECK(cloud_pairing(c, constant_function(1)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(vlasov_step(c, TwoBodyPotential::zero(1), g, 0.0), InvalidArgument);
}

TEST_CASE("Vlasov moments drift at second order under dt refinement") {
  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const auto g = symmetric_line(12.0, 2048);
  const auto c0 = mono_cloud(512, PhaseProfile::sine(0.2, 1.0));
  const auto m0 = cloud_moments(c0, phi);
  auto moments = [&](double dt) {
    auto c = c0;
    VlasovSolver s(phi, g);
    const int steps = static_cast<int>(std::lround(2.0 / dt));
    for (int k = 0; k < steps; ++k) s.advance(c, dt);
    return cloud_moments(c, phi);
  };
  // differences against the halved-dt run cancel the dt-independent deposition error
  const auto a = moments(0.1), b = moments(0.05), c = moments(0.025);
  const double r = std::abs(a.energy() - b.energy()) / std::abs(b.energy() - c.energy());
  CHECK(std::log2(r) == doctest::Approx(2.0).epsilon(0.1));
  for (const auto& m : {a, b, c}) {
    CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(m.momentum[0] - m0.momentum[0]) < 1e-12);
  }
}

TEST_CASE("weak Vlasov residual on the cloud") {
  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const auto g = symmetric_line(12.0, 2048);
  auto c = mono_cloud(512, PhaseProfile::sine(0.2, 1.0));
  VlasovSolver s(phi, g);
  for (int k = 0; k < 10; ++k) s.advance(c, 0.01);
  const double tau = 1e-3;
  auto plus = c;
  s.advance(plus, tau);
  auto rev = c;
  for (double& v : rev.velocities) v = -v;
  s.advance(rev, tau);
  for (double& v : rev.velocities) v = -v;
  for (const auto& F : default_test_panel(1)) {
    const double lhs = (cloud_pairing(plus, F) - cloud_pairing(rev, F)) / (2 * tau);
    CHECK(std::abs(lhs - s.weak_rhs(c, F)) < 1e-5);
  }
}

TEST_CASE("hydro: frozen state, free caustic, mass") {
  const auto still = make_density_field(rho0, PhaseProfile::zero(), 256);
  const auto r = hydro_lagrangian_solve(still, TwoBodyPotential::zero(1), 1.0, 0.05);
  CHECK(r.completed());
  CHECK(r.field.positions == still.positions);
  CHECK(r.field.density == still.density);

  const auto focus = make_density_field(rho0, PhaseProfile::quadratic(-1.0), 256);
  const auto half = hydro_lagrangian_solve(focus, TwoBodyPotential::zero(1), 0.5, 0.01);
  for (int m = 0; m < half.field.size(); ++m) {
    CHECK(half.field.positions[m] == doctest::Approx(0.5 * focus.positions[m]).epsilon(1e-12));
    CHECK(half.field.density[m] == doctest::Approx(2.0 * focus.density[m]).epsilon(1e-12));
  }
  CHECK(std::abs(half.field.total_mass() - 1.0) <= 1e-8);
  const auto c = find_caustic(focus, TwoBodyPotential::zero(1), 2.0, 0.001);
  CHECK(c.detected);
  CHECK(c.estimated_time == doctest::Approx(1.0).epsilon(0.02));
  HydroOptions o;
  o.throw_on_caustic = true;
  CHECK_THROWS_AS(hydro_lagrangian_solve(focus, TwoBodyPotential::zero(1), 1.5, 0.001, o), CausticError);

  const auto g = hydro_lagrangian_solve(make_density_field(rho0, PhaseProfile::sine(0.2, 1.0), 512),
                                        TwoBodyPotential::gaussian(1, 1.0, 1.0), 1.0, 0.01);
  CHECK(std::abs(g.field.total_mass() - 1.0) <= 1e-8);
  for (double d : g.field.density) CHECK(d >= 0.0);
}

TEST_CASE("monokinetic pairing") {
  const auto f = make_density_field(rho0, PhaseProfile::linear({0.6}), 256);
  CHECK(monokinetic_pairing(f, constant_function(1)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(monokinetic_pairing(f, velocity_function(1)) == doctest::Approx(0.6).epsilon(1e-12));

  // large-N classical ensembles approach the hydro pairings
  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const auto sig = PhaseProfile::sine(0.2, 1.0);
  const double t = 1.0;
  HydroOptions ho;
  ho.scheme = classical::Scheme::yoshida4;
  const auto ref = hydro_lagrangian_solve(make_density_field(rho0, sig, 2048), phi, t, 0.01, ho).field;
  const auto panel = default_test_panel(1);
  double prev = INFINITY;
  for (int n : {64, 256, 1024}) {
    classical::MonokineticOptions mo;
    mo.mode = classical::InitMode::quantile;
    classical::FlowOptions fo;
    fo.scheme = classical::Scheme::yoshida4;
    fo.track_energy = false;
    const auto s = classical::flow(classical::monokinetic_init(rho0, sig, n, mo), phi, t, 0.01, fo).final_state;
    double err = 0.0;
    for (const auto& F : panel) err = std::max(err, std::abs(classical::empirical_pairing(s, F) - monokinetic_pairing(ref, F)));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("hydro and Vlasov agree before the caustic; pairings are Lipschitz in the data") {
  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const double t = 0.5;
  HydroOptions ho;
  ho.scheme = classical::Scheme::yoshida4;
  const auto hydro = hydro_lagrangian_solve(make_density_field(rho0, PhaseProfile::zero(), 1024), phi, t, 0.005, ho).field;
  auto cloud = mono_cloud(1024, PhaseProfile::zero());
  VlasovSolver vs(phi, symmetric_line(10.0, 2048));
  for (int k = 0; k < 100; ++k) vs.advance(cloud, 0.005);
  const auto panel = default_test_panel(1);
  for (const auto& F : panel) CHECK(std::abs(cloud_pairing(cloud, F) - monokinetic_pairing(hydro, F)) < 1e-4);

  auto change = [&](double eps) {
    auto c = mono_cloud(256, PhaseProfile::zero());
    const auto base = c;
    for (double& x : c.positions) x += eps;
    VlasovSolver a(phi, symmetric_line(10.0, 1024)), b(phi, symmetric_line(10.0, 1024));
    auto d = base;
    for (int k = 0; k < 20; ++k) a.advance(c, 0.025), b.advance(d, 0.025);
    double m = 0.0;
    for (const auto& F : panel) m = std::max(m, std::abs(cloud_pairing(c, F) - cloud_pairing(d, F)));
    return m;
  };
  const double d1 = change(1e-4), d2 = change(2e-4);
  CHECK(d1 > 0.0);
  CHECK(d2 / d1 == doctest::Approx(2.0).epsilon(0.05));
}
