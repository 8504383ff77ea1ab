#pragma once

#include <span>

#include "mfl/core/potential.hpp"
#include "mfl/core/thread_pool.hpp"

// Direct O(targets x sources) pair sums. Each output row is reduced by a single
// thread in a fixed source order, so results do not depend on the pool size.
namespace mfl::kernels {

/// out_i = -sum_j w_j grad phi(t_i - s_j)   (targets x dim)
void field(const TwoBodyPotential& phi, int dim, std::span<const double> targets,
           std::span<const double> sources, std::span<const double> weights, std::span<double> out,
           ThreadPool* pool = nullptr);

/// out_i = -sum_j w_j Hess phi(t_i - s_j)   (targets x dim x dim, row-major)
void field_jacobian(const TwoBodyPotential& phi, int dim, std::span<const double> targets,
                    std::span<const double> sources, std::span<const double> weights,
                    std::span<double> out, ThreadPool* pool = nullptr);

/// out_i = sum_j w_j phi(t_i - s_j)
void potential(const TwoBodyPotential& phi, int dim, std::span<const double> targets,
               std::span<const double> sources, std::span<const double> weights,
               std::span<double> out, ThreadPool* pool = nullptr);

/// sum_{i<j} w_i w_j phi(x_i - x_j)
double pair_energy(const TwoBodyPotential& phi, int dim, std::span<const double> x,
                   std::span<const double> weights, ThreadPool* pool = nullptr);

/// Dense Jacobian of a_i = -sum_{k != i} w_k grad phi(x_i - x_k) with respect
/// to all positions; (n d) x (n d) row-major.
void acceleration_jacobian(const TwoBodyPotential& phi, int dim, std::span<const double> x,
                           std::span<const double> weights, std::span<double> out,
                           ThreadPool* pool = nullptr);

}  // namespace mfl::kernels
