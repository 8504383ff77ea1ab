#include <cmath>

#include "common.hpp"
#include "mfl/core/errors.hpp"

namespace mfl::lab {

nlohmann::json HRateConfig::to_json() const {
  return {{"ladder", ladder},       {"time", time.to_json()},           {"dt", dt},
          {"max_points", max_points}, {"reference", reference.to_json()}, {"error_floor", error_floor}};
}

ExperimentReport h_rate_experiment(const ProblemSetup& setup, const HRateConfig& config, const RunContext& ctx) {
  if (config.ladder.empty()) throw InvalidArgument("h_rate ladder is empty");
  ExperimentReport report;
  report.experiment = "h_rate";
  report.parameter_name = "h";
  report.config = {{"setup", setup.to_json()}, {"h_rate", config.to_json()}};
  const auto window = validity_window(setup, config.time, ctx);
  const double t = window.target_time;
  report.metrics["caustic_time"] = window.caustic_found ? window.caustic_time : -1.0;
  report.metrics["time"] = t;
  report.regime = t == 0.0 ? "initial Wigner defect (t = 0)" : "Hartree evolution before the caustic";

  auto ref = hydro_reference(setup, t, config.reference, ctx);
  report.metrics["reference_pairings"] = ref.pairings;
  nlohmann::json points = nlohmann::json::array(), drift = points, boundary = points, edge = points, norm = points;
  double worst_boundary = 0.0;
  for (double h : config.ladder) {
    const auto q = detail::quantum_error(setup, h, config.dt, t, config.max_points, ref.pairings, report, ctx);
    report.ladder.push_back(h);
    report.errors.push_back(std::max(q.error, config.error_floor));
    points.push_back(q.points);
    drift.push_back(q.norm_drift);
    boundary.push_back(q.boundary_mass);
    edge.push_back(q.edge_mass);
    norm.push_back(q.normalization);
    worst_boundary = std::max(worst_boundary, q.boundary_mass);
    ctx.info("h_rate h=" + format_number(h) + " points " + std::to_string(q.points) + " error " +
             format_number(q.error));
  }
  report.metrics["grid_points"] = points;
  report.metrics["norm_drift"] = drift;
  report.metrics["boundary_mass"] = boundary;
  report.metrics["wigner_edge_mass"] = edge;
  report.metrics["wigner_normalization"] = norm;
  report.add_check("boundary mass", worst_boundary <= 1e-8,
                   "largest mass near the box edge " + format_number(worst_boundary) +
                       (worst_boundary > 1e-8 ? "; enlarge box_length" : ""));
  if (setup.phi().is_zero_force()) report.notes.push_back("zero force: the reference is exact free classical transport");
  report.fit_errors(config.error_floor);
  verify_reference(ref, setup, detail::smallest_above(report.errors, config.error_floor), report, ctx);
  return report;
}

}  // namespace mfl::lab
