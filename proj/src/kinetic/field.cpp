#include "mfl/kinetic/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfl/core/errors.hpp"
#include "mfl/kinetic/hydro.hpp"

namespace mfl::kinetic {

namespace {

// Corner offsets and weights of the multilinear stencil around x.
struct Stencil {
  size_t base = 0;
  double frac[3] = {0, 0, 0};
  size_t stride[3] = {0, 0, 0};
};

Stencil locate(const SpatialGrid& g, const double* x) {
  Stencil s;
  size_t stride = 1;
  for (int a = g.dim - 1; a >= 0; --a) {
    s.stride[a] = stride;
    stride *= g.points[a];
  }
  for (int a = 0; a < g.dim; ++a) {
    const double u = (x[a] - g.lower[a]) / g.spacing(a);
    const int n = g.points[a];
    if (!(u >= 0.0 && u <= n - 1))
      throw DomainError("point " + std::to_string(x[a]) + " outside field grid axis " + std::to_string(a));
    int i = static_cast<int>(std::floor(u));
    if (i >= n - 1) i = n - 2;
    s.frac[a] = u - i;
    s.base += i * s.stride[a];
  }
  return s;
}

template <class F>
void for_corners(const Stencil& s, int dim, F&& f) {
  for (int c = 0; c < (1 << dim); ++c) {
    size_t idx = s.base;
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      if (c >> a & 1) {
        idx += s.stride[a];
        w *= s.frac[a];
      } else {
        w *= 1.0 - s.frac[a];
      }
    }
    f(idx, w);
  }
}

void check_free_space(const SpatialGrid& g) {
  g.validate();
  if (g.periodic) throw InvalidArgument("kinetic field grids are free-space (non-periodic)");
}

void check_resolution(const TwoBodyPotential& phi, const SpatialGrid& g) {
  if (phi.kind() != PotentialKind::gaussian) return;
  double h = 0.0;
  for (int a = 0; a < g.dim; ++a) h = std::max(h, g.spacing(a));
  if (phi.width() < 2.0 * h)
    throw ResolutionError("potential width " + std::to_string(phi.width()) +
                              " is below two grid spacings (" + std::to_string(2.0 * h) + ")",
                          0.5 * phi.width());
}

}  // namespace

double GridDensity::total_mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.cell_volume();
}

void ForceFieldCache::evaluate(std::span<const double> x, std::span<double> out) const {
  const Stencil s = locate(grid, x.data());
  const int d = grid.dim;
  for (int a = 0; a < d; ++a) out[a] = 0.0;
  for_corners(s, d, [&](size_t idx, double w) {
    for (int a = 0; a < d; ++a) out[a] += w * field[idx * d + a];
  });
}

void ForceFieldCache::evaluate_many(std::span<const double> points, std::span<double> out,
                                    ThreadPool* pool) const {
  const int d = grid.dim;
  parallel_for(pool, points.size() / d, [&](size_t b, size_t e, int) {
    for (size_t i = b; i < e; ++i) evaluate(points.subspan(i * d, d), out.subspan(i * d, d));
  });
}

std::vector<double> ForceFieldCache::component(int axis) const {
  const int d = grid.dim;
  std::vector<double> c(field.size() / d);
  for (size_t i = 0; i < c.size(); ++i) c[i] = field[i * d + axis];
  return c;
}

GridDensity deposit_cic(std::span<const double> positions, std::span<const double> weights, int dim,
                        const SpatialGrid& grid, ThreadPool* pool) {
  check_free_space(grid);
  if (grid.dim != dim) throw InvalidArgument("deposition grid dimension mismatch");
  const size_t n = weights.size(), cells = grid.size();
  const int parts = pool ? pool->size() : 1;
  std::vector<std::vector<double>> buffers(parts, std::vector<double>(cells, 0.0));
  parallel_for(pool, n, [&](size_t b, size_t e, int worker) {
    auto& buf = buffers[worker];
    for (size_t i = b; i < e; ++i) {
      const Stencil s = locate(grid, positions.data() + i * dim);
      for_corners(s, dim, [&](size_t idx, double w) { buf[idx] += w * weights[i]; });
    }
  });
  GridDensity rho{grid, std::move(buffers[0])};
  for (int p = 1; p < parts; ++p)
    for (size_t c = 0; c < cells; ++c) rho.values[c] += buffers[p][c];
  const double inv = 1.0 / grid.cell_volume();
  for (double& v : rho.values) v *= inv;
  return rho;
}

struct FieldSolver::Impl {
  std::vector<int> padded;
  std::unique_ptr<RealFftNd> fft;
  std::vector<std::vector<Complex>> kernel_hat;
  bool zero_force = false;
};

FieldSolver::FieldSolver(const TwoBodyPotential& phi, const SpatialGrid& grid)
    : grid_(grid), impl_(std::make_unique<Impl>()) {
  check_free_space(grid);
  if (phi.dim() != grid.dim) throw InvalidArgument("potential and grid dimensions differ");
  check_resolution(phi, grid);
  const int d = grid.dim;
  impl_->zero_force = phi.is_zero_force();
  if (impl_->zero_force) return;
  for (int a = 0; a < d; ++a) impl_->padded.push_back(2 * grid.points[a]);
  impl_->fft = std::make_unique<RealFftNd>(impl_->padded);
  RealFftNd& f = *impl_->fft;
  const double cell = grid.cell_volume();
  // -grad phi at every offset m in (-n, n) per axis, wrapped into the padded box.
  std::vector<std::vector<double>> kernel(d, std::vector<double>(f.real_size(), 0.0));
  std::vector<double> r(d), grad(d);
  for (size_t q = 0; q < f.real_size(); ++q) {
    size_t rem = q;
    bool inside = true;
    for (int a = d - 1; a >= 0; --a) {
      const int P = impl_->padded[a], n = grid.points[a];
      int m = static_cast<int>(rem % P);
      rem /= P;
      if (m >= n) m -= P;
      if (m <= -n) inside = false;
      r[a] = m * grid.spacing(a);
    }
    if (!inside) continue;
    phi.gradient(r, grad);
    for (int a = 0; a < d; ++a) kernel[a][q] = -grad[a] * cell;
  }
  impl_->kernel_hat.resize(d);
  for (int a = 0; a < d; ++a) {
    std::copy(kernel[a].begin(), kernel[a].end(), f.real_data());
    f.forward();
    impl_->kernel_hat[a].assign(f.complex_data(), f.complex_data() + f.complex_size());
  }
}

FieldSolver::~FieldSolver() = default;
FieldSolver::FieldSolver(FieldSolver&&) noexcept = default;
FieldSolver& FieldSolver::operator=(FieldSolver&&) noexcept = default;

ForceFieldCache FieldSolver::solve(const GridDensity& rho) const {
  const int d = grid_.dim;
  ForceFieldCache out{grid_, std::vector<double>(grid_.size() * d, 0.0), 1};
  if (rho.values.size() != grid_.size()) throw InvalidArgument("density does not live on the solver grid");
  const double mass = rho.total_mass();
  if (std::abs(mass - 1.0) > 1e-8)
    throw InvalidArgument("density is not normalized (mass " + std::to_string(mass) + ")");
  if (impl_->zero_force) return out;

  RealFftNd& f = *impl_->fft;
  std::fill(f.real_data(), f.real_data() + f.real_size(), 0.0);
  const auto& P = impl_->padded;
  auto padded_index = [&](size_t flat) {
    size_t idx = 0, stride = 1, rem = flat;
    std::vector<size_t> k(d);
    for (int a = d - 1; a >= 0; --a) {
      k[a] = rem % grid_.points[a];
      rem /= grid_.points[a];
    }
    for (int a = d - 1; a >= 0; --a) {
      idx += k[a] * stride;
      stride *= P[a];
    }
    return idx;
  };
  std::vector<size_t> map(grid_.size());
  for (size_t c = 0; c < grid_.size(); ++c) map[c] = padded_index(c);
  for (size_t c = 0; c < grid_.size(); ++c) f.real_data()[map[c]] = rho.values[c];
  f.forward();
  const std::vector<Complex> rho_hat(f.complex_data(), f.complex_data() + f.complex_size());
  const double norm = 1.0 / static_cast<double>(f.real_size());
  for (int a = 0; a < d; ++a) {
    for (size_t q = 0; q < f.complex_size(); ++q) f.complex_data()[q] = rho_hat[q] * impl_->kernel_hat[a][q];
    f.backward();
    for (size_t c = 0; c < grid_.size(); ++c) out.field[c * d + a] = f.real_data()[map[c]] * norm;
  }
  return out;
}

ForceFieldCache FieldSolver::solve(const PhaseSpaceCloud& cloud, ThreadPool* pool) const {
  return solve(deposit_cic(cloud.positions, cloud.weights, cloud.dim, grid_, pool));
}

ForceFieldCache self_consistent_field(const GridDensity& rho, const TwoBodyPotential& phi) {
  return FieldSolver(phi, rho.grid).solve(rho);
}

ForceFieldCache self_consistent_field(const PhaseSpaceCloud& cloud, const TwoBodyPotential& phi,
                                      const SpatialGrid& grid) {
  cloud.validate();
  return FieldSolver(phi, grid).solve(cloud);
}

ForceFieldCache self_consistent_field(const DensityField& field, const TwoBodyPotential& phi,
                                      const SpatialGrid& grid) {
  return FieldSolver(phi, grid).solve(deposit_cic(field.positions, field.mass, field.dim, grid));
}

SpatialGrid covering_grid(std::span<const double> positions, int dim, double margin, int points) {
  SpatialGrid g;
  g.dim = dim;
  g.points.assign(dim, points);
  g.lower.assign(dim, std::numeric_limits<double>::infinity());
  g.upper.assign(dim, -std::numeric_limits<double>::infinity());
  for (size_t i = 0; i < positions.size() / dim; ++i)
    for (int a = 0; a < dim; ++a) {
      g.lower[a] = std::min(g.lower[a], positions[i * dim + a]);
      g.upper[a] = std::max(g.upper[a], positions[i * dim + a]);
    }
  for (int a = 0; a < dim; ++a) {
    g.lower[a] -= margin;
    // Nodes stop one spacing short of `upper`; stretch so the last node covers the span.
    const double span = g.upper[a] + margin - g.lower[a];
    g.upper[a] = g.lower[a] + span * points / (points - 1.0);
  }
  g.validate();
  return g;
}

}  // namespace mfl::kinetic
