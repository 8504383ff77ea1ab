#pragma once

#include "mfl/classical/ensemble.hpp"
#include "mfl/core/potential.hpp"
#include "mfl/core/test_panel.hpp"
#include "mfl/core/thread_pool.hpp"

namespace mfl::classical {

/// <mu, F> = sum_i w_i F(x_i, v_i)
double empirical_pairing(const EnsembleState& state, const TestFunction& F);

/// Right side of the weak Vlasov identity for the empirical measure:
/// <mu, v . grad_x F> + <mu, E . grad_v F> with E = -grad phi * mu.
double weak_vlasov_rhs(const EnsembleState& state, const TwoBodyPotential& phi, const TestFunction& F,
                       ThreadPool* pool = nullptr);

/// Two-particle marginal of the symmetrized measure, distinct pairs only:
/// sum_{i != j} w_i w_j F1(z_i) F2(z_j) / (1 - sum w_i^2).
double pair_marginal_pairing(const EnsembleState& state, const TestFunction& F1, const TestFunction& F2);

}  // namespace mfl::classical
