#include "mfl/classical/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfl/core/errors.hpp"
#include "mfl/core/stepping.hpp"

namespace mfl::classical {

double FlowResult::max_energy_drift() const {
  double m = 0.0;
  for (const auto& e : energy) m = std::max(m, std::abs(e.relative_drift));
  return m;
}

int step_count(double t, double dt) { return uniform_steps(t, dt); }

FlowResult flow(const EnsembleState& state0, const TwoBodyPotential& phi, double t, double dt,
                const FlowOptions& options) {
  state0.validate();
  FlowResult r;
  r.steps = step_count(t, dt);
  r.dt = r.steps ? t / r.steps : dt;
  r.final_state = state0;
  EnsembleState& s = r.final_state;
  const double t0 = s.time;
  const double e0 = options.track_energy ? total_energy(s, phi, options.pool) : 0.0;
  auto record = [&] {
    if (!options.track_energy) return;
    const double e = total_energy(s, phi, options.pool);
    r.energy.push_back({s.time, e, e0 != 0.0 ? (e - e0) / std::abs(e0) : e - e0});
  };
  record();
  SymplecticStepper stepper(phi, options.scheme, options.pool);
  const int every = std::max(1, options.record_every);
  for (int k = 1; k <= r.steps; ++k) {
    if (options.cancel && options.cancel->load()) throw Cancelled();
    stepper.advance(s, r.dt);
    s.time = t0 + k * r.dt;
    if (!s.finite())
      throw DivergenceError("flow diverged: non-finite coordinate at t=" + std::to_string(s.time), s.time);
    if (k % every == 0 || k == r.steps) record();
  }
  return r;
}

}  // namespace mfl::classical
