#pragma once

#include <vector>

#include "mfl/core/test_panel.hpp"
#include "mfl/core/thread_pool.hpp"
#include "mfl/quantum/wave.hpp"

namespace mfl::quantum {

struct WignerOptions {
  /// Correlation samples M per column (even, <= n); 0 uses all n points.
  int y_samples = 0;
  /// Keep every x_stride-th column.
  int x_stride = 1;
  /// Store only |v| <= v_limit; 0 keeps the full velocity range.
  double v_limit = 0.0;
  /// Momentum mass allowed in the two outermost velocity bins on each side.
  double alias_tolerance = 1e-6;
  bool check_aliasing = true;
  ThreadPool* pool = nullptr;
};

/// f(x, v) = (1/pi h) int ds exp(-2 i s v / h) psi(x+s) conj(psi(x-s)) sampled
/// at s = m dx, v_k = k pi h / (M dx). Values are x-major.
struct WignerGrid {
  std::vector<double> x;
  std::vector<double> v;
  std::vector<double> values;
  double h = 1.0;
  double dx = 0.0;
  double dv = 0.0;
  /// max |Im| / max |Re| of the column transforms.
  double imaginary_residue = 0.0;
  /// Momentum mass in the two outermost bins on each side.
  double edge_mass = 0.0;
  /// sum_v f dv over the full (uncropped) velocity range, per column.
  std::vector<double> x_marginal;
  /// sum_x f dx over the stored columns, per stored velocity.
  std::vector<double> v_marginal;

  double at(size_t ix, size_t iv) const { return values[ix * v.size() + iv]; }
  double total() const;
};

WignerGrid wigner_transform(const WaveField& psi, const WignerOptions& options = {});

/// Rectangle-rule phase-space quadrature of f F over the stored grid.
double weak_pair_wigner(const WignerGrid& f, const TestFunction& F);

struct WignerPairings {
  std::vector<double> values;
  double normalization = 0.0;
  double edge_mass = 0.0;
};

/// Weak pairings of the Wigner function with every panel function, summed over
/// the full velocity range without storing the grid. Separable functions cost
/// one dot product per column; others fall back to the stored grid.
WignerPairings wigner_pairings(const WaveField& psi, const TestFunctionPanel& panel,
                               const WignerOptions& options = {});

/// Weighted family of pure states on a common grid (a density matrix
/// sum_k q_k |psi_k><psi_k|).
struct StateMixture {
  SpatialGrid grid;
  double h = 1.0;
  std::vector<std::vector<Complex>> states;
  std::vector<double> weights;
};

WignerGrid wigner_transform(const StateMixture& mix, const WignerOptions& options = {});
WignerPairings wigner_pairings(const StateMixture& mix, const TestFunctionPanel& panel,
                               const WignerOptions& options = {});

/// Momentum density P(v) = |psi_hat(v/h)|^2 / (2 pi h) at the Wigner
/// velocities v_k = k pi h / (n dx), from a zero-padded transform.
std::vector<double> momentum_density(const WaveField& psi);

}  // namespace mfl::quantum
