#include "mfl/classical/integrator.hpp"

#include <cmath>

#include "mfl/classical/pair_kernels.hpp"
#include "mfl/core/errors.hpp"

namespace mfl::classical {

const char* to_string(Scheme s) { return s == Scheme::verlet ? "verlet" : "yoshida4"; }

Scheme scheme_from_string(const std::string& name) {
  if (name == "verlet") return Scheme::verlet;
  if (name == "yoshida4") return Scheme::yoshida4;
  throw InvalidArgument("unknown integration scheme '" + name + "'");
}

std::vector<double> scheme_fractions(Scheme s) {
  if (s == Scheme::verlet) return {1.0};
  const double c = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - c);
  const double w0 = -c / (2.0 - c);
  return {w1, w0, w1};
}

std::vector<double> mean_field_force(const EnsembleState& state, const TwoBodyPotential& phi,
                                     ThreadPool* pool) {
  if (state.count < 1) throw InvalidArgument("mean_field_force needs N >= 1");
  std::vector<double> a(state.positions.size());
  kernels::field(phi, state.dim, state.positions, state.positions, state.weights, a, pool);
  return a;
}

double total_energy(const EnsembleState& state, const TwoBodyPotential& phi, ThreadPool* pool) {
  double kin = 0.0;
  for (int i = 0; i < state.count; ++i) {
    double v2 = 0.0;
    for (int a = 0; a < state.dim; ++a) v2 += state.velocities[i * state.dim + a] * state.velocities[i * state.dim + a];
    kin += 0.5 * state.weights[i] * v2;
  }
  const double pot = kernels::pair_energy(phi, state.dim, state.positions, state.weights, pool);
  return state.count * (kin + pot);
}

EnsembleState step_symplectic(const EnsembleState& state, const TwoBodyPotential& phi, double dt) {
  if (dt == 0.0 || !std::isfinite(dt)) throw InvalidArgument("step_symplectic: dt must be nonzero and finite");
  EnsembleState s = state;
  SymplecticStepper(phi).advance(s, dt);
  return s;
}

SymplecticStepper::SymplecticStepper(TwoBodyPotential phi, Scheme scheme, ThreadPool* pool)
    : phi_(std::move(phi)), scheme_(scheme), pool_(pool) {}

void SymplecticStepper::refresh(const EnsembleState& s) {
  if (acc_.size() == s.positions.size() && cached_positions_ == s.positions) return;
  acc_.resize(s.positions.size());
  kernels::field(phi_, s.dim, s.positions, s.positions, s.weights, acc_, pool_);
  cached_positions_ = s.positions;
  ++evaluations_;
}

void SymplecticStepper::kick(EnsembleState& s, double h) {
  for (size_t q = 0; q < s.velocities.size(); ++q) s.velocities[q] += h * acc_[q];
}

void SymplecticStepper::advance(EnsembleState& s, double dt) {
  for (double f : scheme_fractions(scheme_)) {
    const double h = f * dt;
    refresh(s);
    kick(s, 0.5 * h);
    for (size_t q = 0; q < s.positions.size(); ++q) s.positions[q] += h * s.velocities[q];
    refresh(s);
    kick(s, 0.5 * h);
  }
  s.time += dt;
}

}  // namespace mfl::classical
