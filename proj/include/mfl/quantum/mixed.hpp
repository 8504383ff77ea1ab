#pragma once

#include <vector>

#include "mfl/quantum/wigner.hpp"

namespace mfl::quantum {

/// Superposition of WKB states a(x; w) exp(i w x / h) over a compactly
/// supported momentum quadrature {w_k, q_k}. Normalized so that
/// sum_k q_k int |a(x; w_k)|^2 dx = 1.
struct MixedWKBFamily {
  SpatialGrid grid;
  std::vector<double> nodes;
  std::vector<double> weights;
  /// amplitudes[k][j] = a(x_j; w_k)
  std::vector<std::vector<Complex>> amplitudes;
  /// Width of the momentum profile (0 for a single node).
  double momentum_scale = 0.0;

  int size() const { return static_cast<int>(nodes.size()); }
  double total_mass() const;
  double max_momentum() const;
};

/// a(x; w) = a_x(x) sqrt(g(w)) with g the one-dimensional Gaussian `momentum`,
/// trapezoid nodes on center +- support_sigmas * stddev.
MixedWKBFamily make_mixed_family(const AmplitudeProfile& spatial, const GaussianDensity& momentum, int nodes,
                                 const SpatialGrid& grid, double support_sigmas = 6.0);

/// One node of unit weight: a(x; w) = a(x) 1_{w = w0}.
MixedWKBFamily single_node_family(const AmplitudeProfile& a, double w0, const SpatialGrid& grid);

/// psi_k = a(.; w_k) exp(i w_k x / h). Throws ResolutionError when the grid
/// does not resolve the fastest mode and InvalidArgument when the node spacing
/// exceeds half the momentum width.
StateMixture to_mixture(const MixedWKBFamily& family, double h, double safety = 0.5);

WignerGrid mixed_wigner(const MixedWKBFamily& family, double h, const WignerOptions& options = {});
WignerPairings mixed_wigner_pairings(const MixedWKBFamily& family, double h, const TestFunctionPanel& panel,
                                     const WignerOptions& options = {});

/// Pairings of the limit |a(x, v)|^2 with the panel on the family's own nodes:
/// sum_k q_k sum_j |a(x_j; w_k)|^2 F(x_j, w_k) dx.
std::vector<double> mixed_limit_pairings(const MixedWKBFamily& family, const TestFunctionPanel& panel);

}  // namespace mfl::quantum
