#pragma once

#include <string>
#include <vector>

#include "mfl/classical/ensemble.hpp"
#include "mfl/core/potential.hpp"
#include "mfl/core/thread_pool.hpp"

namespace mfl::classical {

enum class Scheme { verlet, yoshida4 };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

/// Substep fractions of one step: {1} for Verlet, the three-stage
/// Yoshida composition for yoshida4.
std::vector<double> scheme_fractions(Scheme s);

/// a_i = -sum_{j != i} w_j grad phi(x_i - x_j); with equal weights this is the
/// 1/N mean-field force.
std::vector<double> mean_field_force(const EnsembleState& state, const TwoBodyPotential& phi,
                                     ThreadPool* pool = nullptr);

/// N [ sum_i w_i |v_i|^2 / 2 + sum_{i<j} w_i w_j phi(x_i - x_j) ]; with equal
/// weights sum |v_i|^2/2 + (1/N) sum_{i<j} phi.
double total_energy(const EnsembleState& state, const TwoBodyPotential& phi, ThreadPool* pool = nullptr);

/// One kick-drift-kick step. Negative dt runs the step backwards.
EnsembleState step_symplectic(const EnsembleState& state, const TwoBodyPotential& phi, double dt);

/// Repeated stepping that caches the end-of-step force for the next kick.
class SymplecticStepper {
public:
  SymplecticStepper(TwoBodyPotential phi, Scheme scheme = Scheme::verlet, ThreadPool* pool = nullptr);

  void advance(EnsembleState& state, double dt);
  /// Force evaluations so far.
  long evaluations() const { return evaluations_; }

private:
  void kick(EnsembleState& s, double h);
  void refresh(const EnsembleState& s);

  TwoBodyPotential phi_;
  Scheme scheme_;
  ThreadPool* pool_;
  std::vector<double> acc_;
  std::vector<double> cached_positions_;
  long evaluations_ = 0;
};

}  // namespace mfl::classical
