#include "mfl/classical/sensitivity.hpp"

#include <algorithm>
#include <cmath>

#include "mfl/classical/tangent.hpp"
#include "mfl/core/errors.hpp"

namespace mfl::classical {

namespace {

void check_indices(const EnsembleState& s, const std::vector<int>& indices) {
  if (indices.empty()) throw InvalidArgument("sensitivity needs at least one column index");
  for (int j : indices)
    if (j < 0 || j >= s.count) throw InvalidArgument("sensitivity index out of range");
}

double block_det(const Eigen::MatrixXd& m, int i, int d) { return m.block(i * d, i * d, d, d).determinant(); }

}  // namespace

Eigen::MatrixXd SensitivityBlocks::position_block(int i, int c) const {
  return position.block(i * dim, c * dim, dim, dim);
}

Eigen::MatrixXd SensitivityBlocks::momentum_block(int i, int c) const {
  return momentum.block(i * dim, c * dim, dim, dim);
}

double SensitivityBlocks::max_off_diagonal() const {
  double m = 0.0;
  for (size_t c = 0; c < indices.size(); ++c)
    for (int i = 0; i < count; ++i) {
      if (i == indices[c]) continue;
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
          const Eigen::Index r = i * dim + a, col = c * dim + b;
          m = std::max(m, std::abs(position(r, col)) + std::abs(momentum(r, col)));
        }
    }
  return m;
}

double SensitivityBlocks::max_diagonal() const {
  double m = 0.0;
  for (size_t c = 0; c < indices.size(); ++c)
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) {
        const Eigen::Index r = indices[c] * dim + a, col = c * dim + b;
        m = std::max(m, std::abs(position(r, col)) + std::abs(momentum(r, col)));
      }
  return m;
}

Eigen::MatrixXd slaving_matrix(const EnsembleState& s, const PhaseProfile& sigma) {
  const int d = s.dim;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(s.count * d, s.count * d);
  std::vector<double> h(d * d);
  for (int i = 0; i < s.count; ++i) {
    sigma.hessian(s.position(i), h);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) S(i * d + a, i * d + b) = h[a * d + b];
  }
  return S;
}

SensitivityBlocks sensitivity_blocks(const EnsembleState& state0, const TwoBodyPotential& phi,
                                     const PhaseProfile& sigma, double t, double dt,
                                     const std::vector<int>& indices, const FlowOptions& options) {
  state0.validate();
  check_indices(state0, indices);
  const int d = state0.dim;
  const Eigen::Index nd = state0.count * d, nc = static_cast<Eigen::Index>(indices.size()) * d;
  Eigen::MatrixXd dX = Eigen::MatrixXd::Zero(nd, nc), dV = Eigen::MatrixXd::Zero(nd, nc);
  std::vector<double> h(d * d);
  for (size_t c = 0; c < indices.size(); ++c) {
    const int j = indices[c];
    sigma.hessian(state0.position(j), h);
    for (int g = 0; g < d; ++g) {
      dX(j * d + g, c * d + g) = 1.0;
      for (int a = 0; a < d; ++a) dV(j * d + a, c * d + g) = h[a * d + g];
    }
  }
  TangentResult r = propagate_tangent(state0, phi, t, dt, std::move(dX), std::move(dV), options);
  SensitivityBlocks out;
  out.count = state0.count;
  out.dim = d;
  out.time = r.state.time;
  out.indices = indices;
  out.position = std::move(r.dX);
  out.momentum = std::move(r.dV);
  return out;
}

SensitivityBlocks pullback_momentum_sensitivity(const EnsembleState& state0, const TwoBodyPotential& phi,
                                                const PhaseProfile& sigma, double t, double s, double dt,
                                                const std::vector<int>& indices, const FlowOptions& options) {
  if (!(s >= 0.0 && s <= t)) throw InvalidArgument("pullback needs 0 <= s <= t");
  state0.validate();
  check_indices(state0, indices);
  const int d = state0.dim;
  const Eigen::Index nd = state0.count * d;
  Eigen::MatrixXd dX = Eigen::MatrixXd::Identity(nd, nd);
  Eigen::MatrixXd dV = slaving_matrix(state0, sigma);

  // Segment [0, s], then [s, t]; each with its own uniform step.
  TangentResult at_s = propagate_tangent(state0, phi, s, dt, std::move(dX), std::move(dV), options);
  const Eigen::MatrixXd As = at_s.dX;
  TangentResult at_t = propagate_tangent(at_s.state, phi, t - s, dt, at_s.dX, at_s.dV, options);

  Eigen::MatrixXd unit = Eigen::MatrixXd::Zero(nd, static_cast<Eigen::Index>(indices.size()) * d);
  for (size_t c = 0; c < indices.size(); ++c)
    for (int g = 0; g < d; ++g) unit(indices[c] * d + g, c * d + g) = 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(As);
  if (std::abs(lu.determinant()) < 1e-300) throw CausticError("position map not invertible at s", s, s);
  const Eigen::MatrixXd y = lu.solve(unit);

  SensitivityBlocks out;
  out.count = state0.count;
  out.dim = d;
  out.time = at_t.state.time;
  out.indices = indices;
  out.position = at_t.dX * y;
  out.momentum = at_t.dV * y;
  return out;
}

JacobianBounds flow_jacobian_bounds(const EnsembleState& state0, const TwoBodyPotential& phi,
                                    const PhaseProfile& sigma, double t, double dt,
                                    const FlowOptions& options, double threshold) {
  state0.validate();
  const int d = state0.dim, n = state0.count;
  const Eigen::Index nd = n * d;
  const Eigen::MatrixXd S = slaving_matrix(state0, sigma);
  Eigen::MatrixXd dX0 = Eigen::MatrixXd::Zero(nd, 2 * nd), dV0 = Eigen::MatrixXd::Zero(nd, 2 * nd);
  dX0.leftCols(nd).setIdentity();
  dV0.rightCols(nd).setIdentity();

  JacobianBounds jb;
  auto slaved = [&](const Eigen::MatrixXd& dX) { return Eigen::MatrixXd(dX.leftCols(nd) + dX.rightCols(nd) * S); };
  auto inspect = [&](const EnsembleState& st, const Eigen::MatrixXd& dX, const Eigen::MatrixXd& dV) {
    const Eigen::MatrixXd P = slaved(dX);
    for (int i = 0; i < n; ++i) {
      const double det = block_det(P, i, d);
      jb.min_over_trajectory = std::min(jb.min_over_trajectory, det);
      if (det <= threshold && !jb.caustic) {
        jb.caustic = true;
        jb.caustic_time = st.time;
      }
    }
    Eigen::MatrixXd M(2 * nd, 2 * nd);
    M << dX, dV;
    jb.max_liouville_error = std::max(jb.max_liouville_error, std::abs(M.partialPivLu().determinant() - 1.0));
  };
  TangentResult r = propagate_tangent(state0, phi, t, dt, dX0, dV0, options, inspect);

  jb.time = r.state.time;
  const Eigen::MatrixXd P = slaved(r.dX);
  jb.diagonal_dets.resize(n);
  for (int i = 0; i < n; ++i) jb.diagonal_dets[i] = block_det(P, i, d);
  jb.min_diagonal_det = *std::min_element(jb.diagonal_dets.begin(), jb.diagonal_dets.end());
  jb.max_diagonal_det = *std::max_element(jb.diagonal_dets.begin(), jb.diagonal_dets.end());
  Eigen::MatrixXd M(2 * nd, 2 * nd);
  M << r.dX, r.dV;
  jb.phase_space_det = M.partialPivLu().determinant();
  return jb;
}

}  // namespace mfl::classical
