#include "mfl/quantum/mixed.hpp"

#include <cmath>
#include <string>

#include "mfl/core/errors.hpp"

namespace mfl::quantum {

double MixedWKBFamily::total_mass() const {
  const double dx = grid.spacing(0);
  double m = 0.0;
  for (int k = 0; k < size(); ++k) {
    double s = 0.0;
    for (const Complex& z : amplitudes[k]) s += std::norm(z);
    m += weights[k] * s * dx;
  }
  return m;
}

double MixedWKBFamily::max_momentum() const {
  double m = 0.0;
  for (double w : nodes) m = std::max(m, std::abs(w));
  return m;
}

namespace {

void normalize(MixedWKBFamily& f) {
  const double m = f.total_mass();
  if (!(m > 0.0)) throw InvalidArgument("mixed family has zero mass");
  const double s = 1.0 / std::sqrt(m);
  for (auto& a : f.amplitudes)
    for (Complex& z : a) z *= s;
}

std::vector<Complex> sample(const AmplitudeProfile& a, const SpatialGrid& grid) {
  std::vector<Complex> out(grid.points[0]);
  for (int j = 0; j < grid.points[0]; ++j) out[j] = a.value(grid.coordinate(0, j));
  return out;
}

}  // namespace

MixedWKBFamily make_mixed_family(const AmplitudeProfile& spatial, const GaussianDensity& momentum, int nodes,
                                 const SpatialGrid& grid, double support_sigmas) {
  if (grid.dim != 1 || !grid.periodic) throw InvalidArgument("mixed family needs a periodic 1-D grid");
  if (momentum.dim() != 1) throw InvalidArgument("momentum profile must be one-dimensional");
  momentum.validate();
  if (nodes < 3) throw InvalidArgument("mixed family needs at least 3 momentum nodes");
  if (!(support_sigmas > 0.0)) throw InvalidArgument("support_sigmas must be positive");
  const double c = momentum.center[0], s = momentum.stddev[0];
  const double lo = c - support_sigmas * s, dw = 2.0 * support_sigmas * s / (nodes - 1);
  const std::vector<Complex> base = sample(spatial, grid);
  MixedWKBFamily f;
  f.grid = grid;
  f.momentum_scale = s;
  for (int k = 0; k < nodes; ++k) {
    const double w = lo + k * dw;
    f.nodes.push_back(w);
    f.weights.push_back(k == 0 || k == nodes - 1 ? 0.5 * dw : dw);
    const double g = std::sqrt(momentum.pdf(std::span<const double>(&w, 1)));
    std::vector<Complex> a(base);
    for (Complex& z : a) z *= g;
    f.amplitudes.push_back(std::move(a));
  }
  normalize(f);
  return f;
}

MixedWKBFamily single_node_family(const AmplitudeProfile& a, double w0, const SpatialGrid& grid) {
  if (grid.dim != 1 || !grid.periodic) throw InvalidArgument("mixed family needs a periodic 1-D grid");
  MixedWKBFamily f;
  f.grid = grid;
  f.nodes = {w0};
  f.weights = {1.0};
  f.amplitudes = {sample(a, grid)};
  normalize(f);
  return f;
}

StateMixture to_mixture(const MixedWKBFamily& family, double h, double safety) {
  if (!(h > 0.0)) throw InvalidArgument("h must be positive");
  const double need = required_spacing(h, family.max_momentum(), safety);
  const double dx = family.grid.spacing(0);
  if (dx > need)
    throw ResolutionError("grid spacing " + std::to_string(dx) + " does not resolve the fastest momentum node; need <= " +
                              std::to_string(need),
                          need);
  if (family.size() > 1 && family.nodes[1] - family.nodes[0] > 0.5 * family.momentum_scale)
    throw InvalidArgument("momentum quadrature too coarse for the amplitude profile");
  StateMixture mix;
  mix.grid = family.grid;
  mix.h = h;
  mix.weights = family.weights;
  for (int k = 0; k < family.size(); ++k) {
    std::vector<Complex> psi(family.amplitudes[k]);
    for (int j = 0; j < (int)psi.size(); ++j)
      psi[j] *= std::polar(1.0, family.nodes[k] * family.grid.coordinate(0, j) / h);
    mix.states.push_back(std::move(psi));
  }
  return mix;
}

WignerGrid mixed_wigner(const MixedWKBFamily& family, double h, const WignerOptions& options) {
  return wigner_transform(to_mixture(family, h), options);
}

WignerPairings mixed_wigner_pairings(const MixedWKBFamily& family, double h, const TestFunctionPanel& panel,
                                     const WignerOptions& options) {
  return wigner_pairings(to_mixture(family, h), panel, options);
}

std::vector<double> mixed_limit_pairings(const MixedWKBFamily& family, const TestFunctionPanel& panel) {
  const double dx = family.grid.spacing(0);
  std::vector<double> out(panel.size(), 0.0);
  for (int k = 0; k < family.size(); ++k)
    for (int j = 0; j < (int)family.amplitudes[k].size(); ++j) {
      const double m = family.weights[k] * std::norm(family.amplitudes[k][j]) * dx;
      if (m == 0.0) continue;
      const double x = family.grid.coordinate(0, j);
      for (size_t p = 0; p < panel.size(); ++p) out[p] += m * panel[p](x, family.nodes[k]);
    }
  return out;
}

}  // namespace mfl::quantum
