#include <cmath>
#include <random>

#include "doctest.h"
#include "mfl/core/errors.hpp"
#include "mfl/core/grid.hpp"
#include "mfl/core/potential.hpp"
#include "mfl/core/test_panel.hpp"

using namespace mfl;

namespace {

std::vector<TwoBodyPotential> all_potentials(int d) {
  return {TwoBodyPotential::gaussian(d, 1.0, 1.0), TwoBodyPotential::gaussian(d, -0.7, 0.6),
          TwoBodyPotential::harmonic(d, 1.3), TwoBodyPotential::constant(d, 2.0), TwoBodyPotential::zero(d)};
}

std::vector<double> random_point(std::mt19937_64& rng, int d, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> x(d);
  for (double& c : x) c = u(rng);
  return x;
}

}  // namespace

TEST_CASE("Gaussian potential closed-form values") {
  const auto phi = make_gaussian_potential(1.0, 1.0, 1);
  double x = 0.0, g = 1.0;
  CHECK(phi.value({&x, 1}) == doctest::Approx(1.0).epsilon(1e-15));
  phi.gradient({&x, 1}, {&g, 1});
  CHECK(g == 0.0);
  x = 1.0;
  phi.gradient({&x, 1}, {&g, 1});
  CHECK(g == doctest::Approx(-std::exp(-0.5)).epsilon(1e-14));
  CHECK(g == doctest::Approx(-0.60653).epsilon(1e-5));
  CHECK_THROWS_AS(make_gaussian_potential(1.0, 0.0, 1), InvalidArgument);
  CHECK_THROWS_AS(make_gaussian_potential(1.0, -1.0, 1), InvalidArgument);
  const auto b = phi.bounds();
  CHECK(std::isfinite(b.value));
  CHECK(std::isfinite(b.gradient));
  CHECK(std::isfinite(b.hessian));
  CHECK(b.value == doctest::Approx(1.0));
}

TEST_CASE("potentials are even with derivatives matching central differences") {
  std::mt19937_64 rng(7);
  for (int d = 1; d <= 3; ++d)
    for (const auto& phi : all_potentials(d))
      for (int probe = 0; probe < 100; ++probe) {
        auto x = random_point(rng, d);
        std::vector<double> mx(d);
        for (int a = 0; a < d; ++a) mx[a] = -x[a];
        const double v = phi.value(x);
        CHECK(std::abs(v - phi.value(mx)) <= 1e-12 * std::abs(v));

        std::vector<double> g(d), H(d * d), gp(d), gm(d);
        phi.gradient(x, g);
        phi.hessian(x, H);
        double gscale = 1e-4, hscale = 1e-4;
        for (int a = 0; a < d; ++a) gscale = std::max(gscale, std::abs(g[a]));
        for (double h : H) hscale = std::max(hscale, std::abs(h));
        for (int a = 0; a < d; ++a) {
          auto xp = x, xm = x;
          xp[a] += 1e-5;
          xm[a] -= 1e-5;
          const double fd = (phi.value(xp) - phi.value(xm)) / 2e-5;
          CHECK(std::abs(fd - g[a]) <= 1e-6 * gscale);
          xp = x, xm = x;
          xp[a] += 1e-4;
          xm[a] -= 1e-4;
          phi.gradient(xp, gp);
          phi.gradient(xm, gm);
          for (int b = 0; b < d; ++b) CHECK(std::abs((gp[b] - gm[b]) / 2e-4 - H[b * d + a]) <= 1e-6 * hscale);
        }
      }
}

TEST_CASE("Kac rescaling") {
  const auto phi = TwoBodyPotential::gaussian(1, 1.0, 1.0);
  const auto [p100, k100] = kac_rescale(phi, 100.0, 1.0);
  CHECK(k100.effective_h == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(k100.effective_h * k100.lambda == 1.0);
  // lambda V(lambda q) with V = phi(x / lambda) / lambda is phi(q) again.
  for (double q = -3.0; q <= 3.0; q += 0.25) CHECK(p100.value({&q, 1}) == doctest::Approx(phi.value({&q, 1})).epsilon(1e-13));

  const auto [p1, k1] = kac_rescale(phi, 1.0, 1.0);
  CHECK(k1.effective_h == 1.0);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    double x = random_point(rng, 1, 4.0)[0];
    CHECK(p1.value({&x, 1}) == phi.value({&x, 1}));
  }
  double prev = INFINITY;
  for (double n : {10.0, 100.0, 1000.0}) {
    const auto k = kac_rescale(phi, n, 1.0).second;
    CHECK(k.effective_h < prev);
    CHECK(k.effective_h == doctest::Approx(1.0 / n).epsilon(1e-15));
    prev = k.effective_h;
  }
  CHECK_THROWS_AS(kac_rescale(phi, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(kac_rescale(phi, 2.0, -1.0), InvalidArgument);
}

TEST_CASE("default test panel") {
  for (int d = 1; d <= 3; ++d) {
    const auto panel = default_test_panel(d);
    CHECK(panel.size() >= 8u);
    std::mt19937_64 rng(11);
    for (const auto& F : panel) {
      CHECK(std::isfinite(F.sup_norm));
      CHECK(std::isfinite(F.sup_gradient));
      CHECK(F.sup_norm > 0.0);
      for (int probe = 0; probe < 20; ++probe) {
        auto x = random_point(rng, d, 1.5), v = random_point(rng, d, 1.5);
        std::vector<double> gx(d), gv(d);
        F.gradient(x, v, gx, gv);
        double scale = 1e-4;
        for (int a = 0; a < d; ++a) scale = std::max({scale, std::abs(gx[a]), std::abs(gv[a])});
        for (int a = 0; a < d; ++a) {
          auto xp = x, xm = x, vp = v, vm = v;
          xp[a] += 1e-5, xm[a] -= 1e-5, vp[a] += 1e-5, vm[a] -= 1e-5;
          CHECK(std::abs((F(xp, v) - F(xm, v)) / 2e-5 - gx[a]) <= 1e-6 * scale);
          CHECK(std::abs((F(x, vp) - F(x, vm)) / 2e-5 - gv[a]) <= 1e-6 * scale);
        }
      }
    }
  }
  const auto p1 = default_test_panel(1);
  CHECK(p1[0](0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p1[0](0.5, -0.3) == doctest::Approx(std::exp(-0.25 - 0.09)).epsilon(1e-14));
  // separable terms reproduce the full function
  for (const auto& F : p1) {
    if (F.separable.empty()) continue;
    for (double x = -2; x <= 2; x += 0.7)
      for (double v = -2; v <= 2; v += 0.9) {
        double s = 0.0;
        for (const auto& t : F.separable) s += t.x_factor(x) * t.v_factor(v);
        CHECK(s == doctest::Approx(F(x, v)).epsilon(1e-13));
      }
  }
}

TEST_CASE("spatial grid contract") {
  const auto g = SpatialGrid::line(-2.0, 2.0, 64, true);
  CHECK(g.spacing(0) == doctest::Approx(4.0 / 64));
  CHECK(g.coordinate(0, 63) == doctest::Approx(2.0 - 4.0 / 64));
  CHECK(g.power_of_two());
  CHECK_THROWS_AS(SpatialGrid::line(-1.0, 1.0, 8, false), InvalidArgument);
  CHECK_THROWS_AS(SpatialGrid::line(1.0, -1.0, 32, false), InvalidArgument);
  const auto c = SpatialGrid::cube(3, -1.0, 1.0, 16, false);
  CHECK(c.size() == 16u * 16u * 16u);
  CHECK(c.cell_volume() == doctest::Approx(std::pow(2.0 / 16, 3)));
  CHECK(is_power_of_two(1024));
  CHECK_FALSE(is_power_of_two(96));
  CHECK(next_power_of_two(100) == 128);
}
