#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mfl/core/grid.hpp"
#include "mfl/core/potential.hpp"
#include "mfl/core/spectral.hpp"
#include "mfl/core/thread_pool.hpp"
#include "mfl/kinetic/cloud.hpp"

namespace mfl::kinetic {

struct DensityField;

/// Mass density (mass per cell volume) sampled on grid nodes.
struct GridDensity {
  SpatialGrid grid;
  std::vector<double> values;

  double total_mass() const;
};

/// E = -grad phi * rho on grid nodes (node-major, dim components each) with
/// multilinear (cloud-in-cell) interpolation to arbitrary points.
struct ForceFieldCache {
  SpatialGrid grid;
  std::vector<double> field;
  int interpolation_order = 1;

  void evaluate(std::span<const double> x, std::span<double> out) const;
  void evaluate_many(std::span<const double> points, std::span<double> out, ThreadPool* pool = nullptr) const;
  /// Node values of one field component.
  std::vector<double> component(int axis) const;
};

/// Cloud-in-cell deposition of weighted points (free-space, non-periodic grid).
/// Points outside the node span raise DomainError.
GridDensity deposit_cic(std::span<const double> positions, std::span<const double> weights, int dim,
                        const SpatialGrid& grid, ThreadPool* pool = nullptr);

/// Caches the padded-FFT transform of grad phi on a fixed free-space grid.
class FieldSolver {
public:
  FieldSolver(const TwoBodyPotential& phi, const SpatialGrid& grid);
  ~FieldSolver();
  FieldSolver(FieldSolver&&) noexcept;
  FieldSolver& operator=(FieldSolver&&) noexcept;

  const SpatialGrid& grid() const { return grid_; }
  ForceFieldCache solve(const GridDensity& rho) const;
  ForceFieldCache solve(const PhaseSpaceCloud& cloud, ThreadPool* pool = nullptr) const;

private:
  struct Impl;
  SpatialGrid grid_;
  std::unique_ptr<Impl> impl_;
};

/// Rejects Gaussian widths below two grid spacings and non-normalized densities.
ForceFieldCache self_consistent_field(const GridDensity& rho, const TwoBodyPotential& phi);
ForceFieldCache self_consistent_field(const PhaseSpaceCloud& cloud, const TwoBodyPotential& phi,
                                      const SpatialGrid& grid);
ForceFieldCache self_consistent_field(const DensityField& field, const TwoBodyPotential& phi,
                                      const SpatialGrid& grid);

/// Grid covering the points with `margin` extra length on every side.
SpatialGrid covering_grid(std::span<const double> positions, int dim, double margin, int points);

}  // namespace mfl::kinetic
