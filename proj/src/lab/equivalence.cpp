#include <cmath>

#include "common.hpp"
#include "mfl/core/errors.hpp"
#include "mfl/core/stepping.hpp"
#include "mfl/kinetic/vlasov.hpp"

namespace mfl::lab {

nlohmann::json EquivalenceConfig::to_json() const {
  return {{"time", time.to_json()},         {"markers", markers},
          {"dt", dt},                       {"field_points", field_points},
          {"field_margin", field_margin},   {"caustic_markers", caustic_markers},
          {"caustic_dt", caustic_dt}};
}

ExperimentReport equivalence_experiment(const ProblemSetup& setup, const EquivalenceConfig& config,
                                        const RunContext& ctx) {
  if (setup.dim != 1) throw InvalidArgument("the equivalence check runs in one dimension");
  ExperimentReport report;
  report.experiment = "equivalence";
  report.parameter_name = "markers";
  report.regime = "monokinetic hydro vs particle-in-cell Vlasov before the caustic";
  report.config = {{"setup", setup.to_json()}, {"equivalence", config.to_json()}};
  const auto window = validity_window(setup, config.time, ctx);
  const double t = window.target_time;
  report.metrics["caustic_time"] = window.caustic_found ? window.caustic_time : -1.0;
  report.metrics["time"] = t;

  const auto phi = setup.phi();
  const auto init = kinetic::make_density_field(setup.density, setup.phase, config.markers);
  kinetic::HydroOptions ho;
  ho.scheme = classical::Scheme::yoshida4;
  ho.track_phase = false;
  ho.throw_on_caustic = true;
  ho.pool = ctx.pool;
  ho.cancel = ctx.cancel;
  const auto hydro = kinetic::hydro_lagrangian_solve(init, phi, t, config.dt, ho).field;

  kinetic::PhaseSpaceCloud cloud;
  cloud.count = init.size();
  cloud.dim = 1;
  cloud.positions = init.positions;
  cloud.velocities = init.velocity;
  cloud.weights = init.mass;
  cloud.validate();
  const auto grid = kinetic::covering_grid(cloud.positions, 1, config.field_margin, config.field_points);
  kinetic::VlasovSolver vlasov(phi, grid, ctx.pool);
  const int steps = uniform_steps(t, config.dt);
  for (int k = 0; k < steps; ++k) {
    ctx.check_cancel();
    vlasov.advance(cloud, t / steps);
  }
  const auto panel = setup.panel();
  std::vector<double> v;
  for (const auto& F : panel) v.push_back(kinetic::cloud_pairing(cloud, F));
  const double diff = report.add_panel_errors(config.markers, -1, t, panel.ids(), v, panel_pairings(hydro, panel));
  report.ladder.push_back(config.markers);
  report.errors.push_back(diff);
  report.metrics["solver_tolerance"] = diff;

  // Free flow with sigma = -x^2/2: every marker reaches J = 1 - t = 0 at t = 1.
  const auto focus = kinetic::make_density_field(setup.density, PhaseProfile::quadratic(-1.0), config.caustic_markers);
  kinetic::HydroOptions fo;
  fo.track_phase = false;
  fo.cancel = ctx.cancel;
  const auto c = kinetic::find_caustic(focus, TwoBodyPotential::zero(1), 2.0, config.caustic_dt, fo);
  report.metrics["free_caustic"] = {{"detected", c.detected},
                                    {"abort_time", c.abort_time},
                                    {"estimated_time", c.estimated_time},
                                    {"min_jacobian", c.min_jacobian}};
  report.add_check("free caustic detected", c.detected, c.message());
  ctx.info("equivalence: pairing difference " + format_number(diff) + ", free caustic " +
           format_number(c.estimated_time));
  return report;
}

}  // namespace mfl::lab
