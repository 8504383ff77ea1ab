#include <cmath>

#include "common.hpp"
#include "mfl/core/errors.hpp"
#include "mfl/quantum/mixed.hpp"

namespace mfl::lab {

nlohmann::json MixedConfig::to_json() const {
  return {{"ladder", ladder},         {"momentum_center", momentum_center}, {"momentum_stddev", momentum_stddev},
          {"nodes", nodes},           {"support_sigmas", support_sigmas},   {"max_points", max_points},
          {"error_floor", error_floor}};
}

ExperimentReport mixed_state_experiment(const ProblemSetup& setup, const MixedConfig& config, const RunContext& ctx) {
  if (setup.dim != 1) throw InvalidArgument("mixed states run in one dimension");
  if (config.ladder.empty()) throw InvalidArgument("mixed_state ladder is empty");
  ExperimentReport report;
  report.experiment = "mixed_state";
  report.parameter_name = "h";
  report.regime = "mixed WKB superposition against |a(x, v)|^2 at t = 0";
  report.config = {{"setup", setup.to_json()}, {"mixed_state", config.to_json()}};
  const auto momentum = GaussianDensity::isotropic(1, config.momentum_center, config.momentum_stddev);
  const double wmax = std::abs(config.momentum_center) + config.support_sigmas * config.momentum_stddev;
  const auto panel = setup.panel();
  nlohmann::json pts = nlohmann::json::array(), norm = pts, mass = pts;
  double worst_mass = 0.0;
  for (double h : config.ladder) {
    ctx.check_cancel();
    const auto grid = detail::quantum_grid(setup, h, wmax, config.max_points);
    const auto fam =
        quantum::make_mixed_family(setup.amplitude(), momentum, config.nodes, grid, config.support_sigmas);
    quantum::WignerOptions wo;
    wo.pool = ctx.pool;
    const auto w = quantum::mixed_wigner_pairings(fam, h, panel, wo);
    const auto limit = quantum::mixed_limit_pairings(fam, panel);
    const double e = report.add_panel_errors(h, -1, 0.0, panel.ids(), w.values, limit);
    report.ladder.push_back(h);
    report.errors.push_back(std::max(e, config.error_floor));
    pts.push_back(grid.points[0]);
    norm.push_back(w.normalization);
    mass.push_back(fam.total_mass());
    worst_mass = std::max(worst_mass, std::abs(fam.total_mass() - 1.0));
    ctx.info("mixed_state h=" + format_number(h) + " error " + format_number(e));
  }
  report.metrics["grid_points"] = pts;
  report.metrics["wigner_normalization"] = norm;
  report.metrics["family_mass"] = mass;
  report.add_check("family normalization", worst_mass <= 1e-8, "max |mass - 1| " + format_number(worst_mass));
  report.fit_errors(config.error_floor);
  return report;
}

}  // namespace mfl::lab
