#include <cmath>

#include "common.hpp"
#include "mfl/classical/flow.hpp"
#include "mfl/classical/pairing.hpp"
#include "mfl/core/errors.hpp"
#include "mfl/quantum/hartree.hpp"
#include "mfl/quantum/wigner.hpp"

namespace mfl::lab {

namespace detail {

double classical_error(const ProblemSetup& setup, int count, classical::InitMode mode, std::uint64_t seed,
                       classical::Scheme scheme, double dt, double t, const std::vector<double>& reference,
                       ExperimentReport& report, int seed_tag, const RunContext& ctx) {
  ctx.check_cancel();
  classical::MonokineticOptions mo;
  mo.mode = mode;
  mo.seed = seed;
  const auto state = classical::monokinetic_init(setup.density, setup.phase, count, mo);
  classical::FlowOptions fo;
  fo.scheme = scheme;
  fo.track_energy = false;
  fo.pool = ctx.pool;
  fo.cancel = ctx.cancel;
  const auto res = classical::flow(state, setup.phi(), t, dt, fo);
  const auto panel = setup.panel();
  std::vector<double> values;
  for (const auto& F : panel) values.push_back(classical::empirical_pairing(res.final_state, F));
  return report.add_panel_errors(count, seed_tag, t, panel.ids(), values, reference);
}

SpatialGrid quantum_grid(const ProblemSetup& setup, double h, double max_momentum, int max_points) {
  const int n = quantum::resolve_points(setup.box_length, h, max_momentum, setup.resolution_safety);
  if (n > max_points)
    throw ResolutionError("h=" + format_number(h) + " needs " + std::to_string(n) + " grid points (spacing <= " +
                              format_number(quantum::required_spacing(h, max_momentum, setup.resolution_safety)) +
                              "), above the limit " + std::to_string(max_points),
                          quantum::required_spacing(h, max_momentum, setup.resolution_safety));
  return quantum::periodic_line(setup.box_length, n);
}

QuantumPoint quantum_error(const ProblemSetup& setup, double h, double dt, double t, int max_points,
                           const std::vector<double>& reference, ExperimentReport& report, const RunContext& ctx) {
  if (setup.dim != 1) throw InvalidArgument("quantum experiments run in one dimension");
  ctx.check_cancel();
  const auto grid = quantum_grid(setup, h, setup.max_momentum(), max_points);
  auto psi = quantum::wkb_initialize(setup.amplitude(), setup.phase, h, grid, setup.resolution_safety);
  QuantumPoint q;
  q.points = grid.points[0];
  const double n0 = psi.norm();
  quantum::HartreeSolver(setup.phi(), grid, h).evolve(psi, t, dt, ctx.cancel);
  q.norm_drift = std::abs(psi.norm() - n0);
  q.boundary_mass = quantum::boundary_mass(psi);
  quantum::WignerOptions wo;
  wo.pool = ctx.pool;
  const auto panel = setup.panel();
  const auto w = quantum::wigner_pairings(psi, panel, wo);
  q.edge_mass = w.edge_mass;
  q.normalization = w.normalization;
  q.error = report.add_panel_errors(h, -1, t, panel.ids(), w.values, reference);
  return q;
}

double smallest_above(const std::vector<double>& v, double floor) {
  double m = INFINITY;
  for (double x : v)
    if (x > floor) m = std::min(m, x);
  return m;
}

}  // namespace detail

nlohmann::json NRateConfig::to_json() const {
  return {{"ladder", ladder},
          {"mode", classical::to_string(mode)},
          {"scheme", classical::to_string(scheme)},
          {"dt", dt},
          {"time", time.to_json()},
          {"seeds", seeds},
          {"seed", seed},
          {"reference_markers", reference_markers},
          {"verify_reference", verify_reference},
          {"error_floor", error_floor}};
}

ExperimentReport n_rate_experiment(const ProblemSetup& setup, const NRateConfig& config, const RunContext& ctx) {
  if (config.ladder.empty()) throw InvalidArgument("n_rate ladder is empty");
  ExperimentReport report;
  report.experiment = "n_rate";
  report.parameter_name = "N";
  report.config = {{"setup", setup.to_json()}, {"n_rate", config.to_json()}};
  const auto window = validity_window(setup, config.time, ctx);
  const double t = window.target_time;
  report.metrics["caustic_time"] = window.caustic_found ? window.caustic_time : -1.0;
  report.metrics["time"] = t;

  ReferenceConfig rc;
  rc.markers = config.reference_markers;
  rc.dt = config.dt;
  rc.scheme = config.scheme;
  rc.verify = config.verify_reference;
  auto ref = hydro_reference(setup, t, rc, ctx);
  report.metrics["reference_pairings"] = ref.pairings;
  for (int N : config.ladder) report.ladder.push_back(N);

  if (config.mode != classical::InitMode::monte_carlo) {
    report.regime = std::string("deterministic ") + classical::to_string(config.mode) +
                    " initialization; rate limited by the quadrature, not by sampling noise";
    for (int N : config.ladder) {
      const double e = detail::classical_error(setup, N, config.mode, config.seed, config.scheme, config.dt, t,
                                               ref.pairings, report, -1, ctx);
      report.errors.push_back(std::max(e, config.error_floor));
      ctx.info("n_rate N=" + std::to_string(N) + " error " + format_number(e));
    }
  } else {
    if (config.seeds < 1) throw InvalidArgument("monte carlo mode needs at least one seed");
    report.regime = "monte carlo (iid) initialization: CLT fluctuations, expected slope about -1/2";
    std::vector<double> log_sum(config.ladder.size(), 0.0);
    nlohmann::json slopes = nlohmann::json::array();
    for (int s = 0; s < config.seeds; ++s) {
      std::vector<double> e;
      for (int N : config.ladder)
        e.push_back(std::max(config.error_floor,
                             detail::classical_error(setup, N, config.mode, config.seed + s, config.scheme, config.dt,
                                                     t, ref.pairings, report, s, ctx)));
      for (size_t k = 0; k < e.size(); ++k) log_sum[k] += std::log(e[k]);
      if (e.size() >= 4) slopes.push_back(fit_slope(report.ladder, e).slope);
      ctx.info("n_rate seed " + std::to_string(s) + " done");
    }
    // OLS is linear in log e, so the fit of geometric-mean errors has the mean seed slope.
    for (double l : log_sum) report.errors.push_back(std::exp(l / config.seeds));
    report.metrics["seed_slopes"] = slopes;
    if (!slopes.empty()) {
      double m = 0.0, v = 0.0;
      for (const auto& x : slopes) m += x.get<double>();
      m /= slopes.size();
      for (const auto& x : slopes) v += std::pow(x.get<double>() - m, 2);
      report.metrics["mean_slope"] = m;
      report.metrics["slope_stddev"] = slopes.size() > 1 ? std::sqrt(v / (slopes.size() - 1)) : 0.0;
    }
  }
  if (setup.phi().is_zero_force()) report.notes.push_back("zero force: both sides are exact free transports");
  report.fit_errors(config.error_floor);
  verify_reference(ref, setup, detail::smallest_above(report.errors, config.error_floor), report, ctx);
  return report;
}

}  // namespace mfl::lab
