#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mfl/core/errors.hpp"
#include "mfl/quantum/grenier.hpp"
#include "mfl/quantum/hartree.hpp"
#include "mfl/quantum/mixed.hpp"
#include "mfl/quantum/wigner.hpp"

using namespace mfl;
using namespace mfl::quantum;
using std::numbers::pi;

namespace {

AmplitudeProfile unit_gaussian(double chirp = 0.0) {
  // |a|^2 = exp(-x^2)/sqrt(pi)
  return {GaussianDensity::isotropic(1, 0.0, std::sqrt(0.5)), chirp};
}

double l2_diff(const std::vector<Complex>& a, const std::vector<Complex>& b, double dx) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s * dx);
}

}  // namespace

TEST_CASE("wkb_initialize normalizes and enforces resolution") {
  const auto grid = periodic_line(4 * pi, 256);
  const auto psi = wkb_initialize(unit_gaussian(), PhaseProfile::sine(0.2, 1.0), 0.1, grid);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  // sigma = 0 and real a gives a real state
  const auto real = wkb_initialize(unit_gaussian(), PhaseProfile::zero(), 0.1, grid);
  for (const auto& z : real.values) CHECK(std::abs(z.imag()) == 0.0);
  CHECK_THROWS_AS(wkb_initialize(unit_gaussian(), PhaseProfile::sine(0.2, 1.0), 0.001, grid), ResolutionError);
  try {
    wkb_initialize(unit_gaussian(), PhaseProfile::sine(0.2, 1.0), 0.001, grid);
  } catch (const ResolutionError& e) {
    CHECK(e.required_spacing() == doctest::Approx(0.001 / (0.8 + 0.5)));
  }
}

TEST_CASE("free Hartree evolution matches the spreading Gaussian") {
  const double h = 0.5, t = 1.0, L = 40.0;
  const auto grid = periodic_line(L, 512);
  auto psi = wkb_initialize(unit_gaussian(), PhaseProfile::zero(), h, grid);
  HartreeSolver solver(TwoBodyPotential::zero(1), grid, h);
  solver.evolve(psi, t, 0.05);
  CHECK(psi.time == doctest::Approx(t));
  std::vector<Complex> exact(psi.size());
  const Complex z(1.0, h * t);
  for (int i = 0; i < psi.size(); ++i) {
    const double x = grid.coordinate(0, i);
    exact[i] = std::pow(pi, -0.25) / std::sqrt(z) * std::exp(-x * x / (2.0 * z));
  }
  CHECK(l2_diff(psi.values, exact, psi.dx()) < 1e-10);
}

TEST_CASE("Hartree step is unitary and second order") {
  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const double h = 0.1;
  const auto grid = periodic_line(4 * pi, 512);
  const auto psi0 = wkb_initialize(unit_gaussian(0.5), PhaseProfile::sine(0.2, 1.0), h, grid);
  HartreeSolver solver(phi, grid, h);
  auto psi = psi0;
  for (int k = 0; k < 50; ++k) {
    const double before = psi.norm();
    solver.step(psi, 0.01);
    CHECK(std::abs(psi.norm() - before) < 1e-12);
  }
  // Self-refinement: errors against a dt/8 solution.
  auto run = [&](double dt) {
    WaveField p = psi0;
    HartreeSolver s(phi, grid, h);
    s.evolve(p, 1.0, dt);
    return p;
  };
  const auto ref = run(0.0025);
  const double e1 = l2_diff(run(0.04).values, ref.values, psi0.dx());
  const double e2 = l2_diff(run(0.02).values, ref.values, psi0.dx());
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("Wigner transform of a chirped Gaussian matches the closed form") {
  const double h = 0.25, beta = 0.5;
  const auto grid = periodic_line(16.0, 256);
  const auto psi = wkb_initialize(unit_gaussian(beta), PhaseProfile::zero(), h, grid);
  const auto f = wigner_transform(psi);
  double err = 0.0;
  for (size_t i = 0; i < f.x.size(); ++i)
    for (size_t k = 0; k < f.v.size(); ++k) {
      const double x = f.x[i], v = f.v[k];
      const double exact = std::exp(-x * x - std::pow(v - h * beta * x, 2) / (h * h)) / (pi * h);
      err = std::max(err, std::abs(f.at(i, k) - exact));
    }
  CHECK(err < 1e-10);
  CHECK(f.imaginary_residue < 1e-10);
  CHECK(f.total() == doctest::Approx(1.0).epsilon(1e-8));
  const auto rho = psi.density();
  for (size_t i = 0; i < f.x.size(); ++i) CHECK(std::abs(f.x_marginal[i] - rho[i]) < 1e-8 * (1.0 + rho[i]));
  // v-marginal against the momentum density
  const auto P = momentum_density(psi);
  REQUIRE(P.size() == f.v.size());
  for (size_t k = 0; k < P.size(); ++k) CHECK(std::abs(f.v_marginal[k] - P[k]) < 1e-8);
}

TEST_CASE("Wigner transform is modulation covariant and pairs with observables") {
  const double h = 0.25;
  const int n = 256;
  const auto grid = periodic_line(16.0, n);
  const double dv = pi * h / 16.0;
  const double w = 2.0 * 3 * dv;  // periodic on the box
  const auto psi = wkb_initialize(unit_gaussian(0.3), PhaseProfile::zero(), h, grid);
  const auto shifted = wkb_initialize(unit_gaussian(0.3), PhaseProfile::linear({w}), h, grid);
  const auto f = wigner_transform(psi), g = wigner_transform(shifted);
  REQUIRE(f.dv == doctest::Approx(dv));
  double err = 0.0;
  for (size_t i = 0; i < f.x.size(); ++i)
    for (size_t k = 0; k + 6 < f.v.size(); ++k) err = std::max(err, std::abs(g.at(i, k + 6) - f.at(i, k)));
  CHECK(err < 1e-12);
  CHECK(weak_pair_wigner(g, velocity_function(1)) == doctest::Approx(w).epsilon(1e-8));
  double x2 = 0.0;
  const auto rho = psi.density();
  for (int i = 0; i < n; ++i) x2 += std::pow(grid.coordinate(0, i), 2) * rho[i] * psi.dx();
  CHECK(weak_pair_wigner(f, position_square_function(1)) == doctest::Approx(x2).epsilon(1e-8));
  CHECK(weak_pair_wigner(f, constant_function(1)) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("fast separable pairings agree with the stored grid") {
  const double h = 0.1;
  const auto grid = periodic_line(4 * pi, 512);
  const auto psi = wkb_initialize(unit_gaussian(0.5), PhaseProfile::sine(0.2, 1.0), h, grid);
  const auto panel = default_test_panel(1);
  const auto fast = wigner_pairings(psi, panel);
  const auto f = wigner_transform(psi);
  for (size_t p = 0; p < panel.size(); ++p) CHECK(fast.values[p] == doctest::Approx(weak_pair_wigner(f, panel[p])).epsilon(1e-10));
  CHECK(fast.normalization == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("Wigner transform flags aliasing") {
  // Broad packet whose momentum sits next to the edge of the velocity grid.
  const double h = 1.0;
  const auto grid = periodic_line(16.0, 64);
  const double vmax = pi * h / (2.0 * grid.spacing(0));
  const double w = 2.0 * pi * h * 15.0 / 16.0;
  REQUIRE(w < vmax);
  WaveField psi;
  psi.grid = grid;
  psi.h = h;
  for (int i = 0; i < 64; ++i) {
    const double x = grid.coordinate(0, i);
    psi.values.push_back(std::exp(-x * x / 16.0) * std::polar(1.0, w * x / h) / std::pow(8.0 * pi, 0.25));
  }
  CHECK_THROWS_AS(wigner_transform(psi), AliasingError);
  WignerOptions o;
  o.check_aliasing = false;
  CHECK(wigner_transform(psi, o).edge_mass > 1e-6);
  const auto calm = wkb_initialize({GaussianDensity::isotropic(1, 0.0, 1.0), 0.0}, PhaseProfile::zero(), h, grid);
  CHECK(wigner_transform(calm).edge_mass < 1e-12);
}

TEST_CASE("Grenier system: plane-wave phase transports the amplitude rigidly") {
  const double w = 0.7, h = 0.5, t = 1.0;
  const auto grid = periodic_line(20.0, 256);
  auto f = make_wkb_fields(unit_gaussian(), PhaseProfile::linear({w}), h, grid);
  const auto a0 = f.amplitude;
  GrenierSolver solver(TwoBodyPotential::zero(1), grid, h, false);
  const double n0 = solver.amplitude_gradient_norm(f);
  solver.evolve(f, t, 0.005);
  double es = 0.0, ea = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    es = std::max(es, std::abs(f.phase[i] + 0.5 * w * w * t));
    const double x = grid.coordinate(0, i) - w * t;
    ea = std::max(ea, std::abs(f.amplitude[i] - std::pow(pi, -0.25) * std::exp(-x * x / 2)));
  }
  CHECK(es < 1e-12);
  CHECK(ea < 1e-6);
  CHECK(solver.amplitude_gradient_norm(f) == doctest::Approx(n0).epsilon(1e-6));
  CHECK(std::abs(f.amplitude_norm() - 1.0) < 1e-8);
  (void)a0;
}

TEST_CASE("Grenier system with the h term reproduces Hartree evolution") {
  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const double h = 0.1, t = 1.0;
  const auto grid = periodic_line(4 * pi, 256);
  auto f = make_wkb_fields(unit_gaussian(0.5), PhaseProfile::sine(0.2, 1.0), h, grid);
  auto psi = f.reconstruct();
  GrenierSolver g(phi, grid, h, true);
  g.evolve(f, t, 0.5 * g.max_stable_dt(f));
  HartreeSolver(phi, grid, h).evolve(psi, t, 0.001);
  CHECK(l2_diff(f.reconstruct().values, psi.values, grid.spacing(0)) < 1e-5);
}

TEST_CASE("Grenier transport conserves amplitude mass without the h term") {
  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const auto grid = periodic_line(4 * pi, 256);
  auto f = make_wkb_fields(unit_gaussian(0.5), PhaseProfile::sine(0.2, 1.0), 0.1, grid);
  GrenierSolver g(phi, grid, 0.1, false);
  g.evolve(f, 2.0, 0.005);
  CHECK(std::abs(f.amplitude_norm() - 1.0) < 1e-8);
  const auto d = g.diagnostics(f);
  CHECK(d.gamma.size() == 256u);
  CHECK(d.min_jacobian < 1.0);
}

TEST_CASE("Grenier commutator diagnostic matches -h Im(conj(a) a'')") {
  const double h = 0.2, beta = 0.5;
  const auto grid = periodic_line(16.0, 256);
  auto f = make_wkb_fields(unit_gaussian(beta), PhaseProfile::zero(), h, grid);
  GrenierSolver g(TwoBodyPotential::zero(1), grid, h, true);
  const auto d = g.diagnostics(f);
  // a = pi^{-1/4} exp((i beta - 1) x^2 / 2): conj(a) a'' = |a|^2 (c^2 x^2 + c), c = i beta - 1.
  const Complex c(-1.0, beta);
  for (int i = 0; i < f.size(); i += 7) {
    const double x = grid.coordinate(0, i);
    const double exact = -h * (std::exp(-x * x) / std::sqrt(pi) * (c * c * x * x + c)).imag();
    CHECK(std::abs(d.commutator[i] - exact) < 1e-10);
  }
}

TEST_CASE("Grenier solver reports the free caustic of a sine phase") {
  // phi = 0, sigma = 0.2 sin x: characteristics cross at t = 1 / 0.2 = 5.
  const auto grid = periodic_line(2 * pi, 256);
  auto f = make_wkb_fields(unit_gaussian(), PhaseProfile::sine(0.2, 1.0), 0.05, grid);
  GrenierSolver g(TwoBodyPotential::zero(1), grid, 0.05, false);
  try {
    g.evolve(f, 6.0, 0.005);
    FAIL("no caustic reported");
  } catch (const CausticError& e) {
    CHECK(e.time() < 5.0);
    CHECK(e.estimated_time() == doctest::Approx(5.0).epsilon(0.02));
  }
}

TEST_CASE("Grenier solver rejects non-periodic phases and unstable steps") {
  const auto grid = periodic_line(10.0, 256);
  CHECK_THROWS_AS(make_wkb_fields(unit_gaussian(), PhaseProfile::sine(0.2, 1.0), 0.1, grid), InvalidArgument);
  CHECK_THROWS_AS(make_wkb_fields(unit_gaussian(), PhaseProfile::quadratic(-1.0), 0.1, grid), InvalidArgument);
  auto f = make_wkb_fields(unit_gaussian(), PhaseProfile::zero(), 0.1, grid);
  GrenierSolver g(TwoBodyPotential::zero(1), grid, 0.1, true);
  CHECK_THROWS_AS(g.step(f, 2.0 * g.max_stable_dt(f)), InvalidArgument);
}

TEST_CASE("h1 track: closed form at t=0, constant under rigid transport, Gronwall bound") {
  const auto grid = periodic_line(20.0, 256);
  auto f = make_wkb_fields(unit_gaussian(), PhaseProfile::linear({0.5}), 0.5, grid);
  const auto rigid = h1_norm_track(f, TwoBodyPotential::zero(1), {0.0, 0.5, 1.0}, 0.01, false);
  CHECK(rigid.norms[0] * rigid.norms[0] == doctest::Approx(0.5).epsilon(1e-10));
  for (double n : rigid.norms) CHECK(n == doctest::Approx(rigid.norms[0]).epsilon(1e-6));

  const auto box = periodic_line(4 * pi, 256);
  auto g = make_wkb_fields(unit_gaussian(0.5), PhaseProfile::sine(0.2, 1.0), 0.1, box);
  const auto tr = h1_norm_track(g, TwoBodyPotential::gaussian(1, 1.0, 1.0), {0.5, 1.0, 1.5, 2.0}, 0.005, true);
  CHECK(tr.norms.size() == 5u);
  CHECK(tr.gronwall_ok);
  for (size_t k = 0; k < tr.norms.size(); ++k)
    CHECK(tr.norms[k] <= std::exp(tr.fitted_rate * tr.times[k]) * tr.norms[0] * (1.0 + 1e-12));
}

TEST_CASE("mixed family: normalization and single-node reduction") {
  const double h = 0.2;
  const auto grid = periodic_line(4 * pi, 512);
  const auto fam = make_mixed_family(unit_gaussian(0.5), GaussianDensity::isotropic(1, 0.0, 0.3), 33, grid);
  CHECK(fam.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  const auto fr = mixed_wigner(fam, h);
  CHECK(fr.total() == doctest::Approx(1.0).epsilon(1e-8));
  const auto panel = default_test_panel(1);
  const auto fast = mixed_wigner_pairings(fam, h, panel);
  for (size_t p = 0; p < panel.size(); ++p)
    CHECK(fast.values[p] == doctest::Approx(weak_pair_wigner(fr, panel[p])).epsilon(1e-10));

  const double w0 = 2.0 * 2 * pi * h / (4 * pi);  // periodic plane wave
  const auto one = single_node_family(unit_gaussian(0.5), w0, grid);
  const auto fo = mixed_wigner(one, h);
  const auto psi = wkb_initialize(unit_gaussian(0.5), PhaseProfile::linear({w0}), h, grid);
  const auto fp = wigner_transform(psi);
  double err = 0.0;
  for (size_t i = 0; i < fo.values.size(); ++i) err = std::max(err, std::abs(fo.values[i] - fp.values[i]));
  CHECK(err < 1e-12);
  CHECK_THROWS_AS(make_mixed_family(unit_gaussian(), GaussianDensity::isotropic(1, 0.0, 0.3), 5, grid).nodes.size() &&
                      to_mixture(make_mixed_family(unit_gaussian(), GaussianDensity::isotropic(1, 0.0, 0.3), 5, grid), h).states.size(),
                  InvalidArgument);
}
