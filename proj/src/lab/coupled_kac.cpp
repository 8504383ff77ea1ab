#include <cmath>

#include "common.hpp"
#include "mfl/core/errors.hpp"

namespace mfl::lab {

nlohmann::json KacConfig::to_json() const {
  return {{"hbar", hbar},
          {"ladder", ladder},
          {"time", time.to_json()},
          {"mode", classical::to_string(mode)},
          {"scheme", classical::to_string(scheme)},
          {"classical_dt", classical_dt},
          {"quantum_dt", quantum_dt},
          {"max_points", max_points},
          {"reference", reference.to_json()},
          {"stability_tolerance", stability_tolerance}};
}

ExperimentReport coupled_kac_experiment(const ProblemSetup& setup, const KacConfig& config, const RunContext& ctx) {
  if (config.ladder.size() < 2) throw InvalidArgument("coupled_kac needs at least two ladder points");
  if (!(config.hbar > 0.0)) throw InvalidArgument("hbar must be positive");
  ExperimentReport report;
  report.experiment = "coupled_kac";
  report.parameter_name = "N";
  report.regime = "Kac path lambda = N, h = hbar / N";
  report.config = {{"setup", setup.to_json()}, {"coupled_kac", config.to_json()}};
  const auto window = validity_window(setup, config.time, ctx);
  const double t = window.target_time;
  report.metrics["caustic_time"] = window.caustic_found ? window.caustic_time : -1.0;
  report.metrics["time"] = t;

  auto ref = hydro_reference(setup, t, config.reference, ctx);
  const auto phi = setup.phi();
  const auto panel = setup.panel();
  nlohmann::json hs = nlohmann::json::array(), ecl = hs, eq = hs, cs = hs, pts = hs;
  std::vector<double> C;
  bool exact_h = true;
  for (int N : config.ladder) {
    const auto [scaled, kac] = kac_rescale(phi, N, config.hbar);
    const double h = kac.effective_h;
    exact_h = exact_h && h == config.hbar / N && scaled.describe() == phi.describe();
    // Classical and quantum entries share the report; ids carry the side.
    ExperimentReport side;
    const double e_cl = detail::classical_error(setup, N, config.mode, 0, config.scheme, config.classical_dt, t,
                                                ref.pairings, side, -1, ctx);
    const auto q = detail::quantum_error(setup, h, config.quantum_dt, t, config.max_points, ref.pairings, side, ctx);
    for (size_t k = 0; k < side.entries.size(); ++k) {
      auto e = side.entries[k];
      e.function = (k < panel.size() ? "classical:" : "quantum:") + e.function;
      report.entries.push_back(std::move(e));
    }
    const double combined = e_cl + q.error;
    report.ladder.push_back(N);
    report.errors.push_back(combined);
    C.push_back(combined / (h + 1.0 / N));
    hs.push_back(h);
    ecl.push_back(e_cl);
    eq.push_back(q.error);
    cs.push_back(C.back());
    pts.push_back(q.points);
    ctx.info("coupled_kac N=" + std::to_string(N) + " h=" + format_number(h) + " classical " + format_number(e_cl) +
             " quantum " + format_number(q.error) + " C " + format_number(C.back()));
  }
  double logm = 0.0;
  for (double c : C) logm += std::log(c);
  const double Cg = std::exp(logm / C.size());
  double Cmax = 0.0, spread = 0.0;
  for (double c : C) {
    Cmax = std::max(Cmax, c);
    spread = std::max(spread, std::abs(c / Cg - 1.0));
  }
  bool monotone = true;
  for (size_t k = 1; k < report.errors.size(); ++k) monotone = monotone && report.errors[k] < report.errors[k - 1];
  report.metrics["h"] = hs;
  report.metrics["classical_error"] = ecl;
  report.metrics["quantum_error"] = eq;
  report.metrics["C"] = cs;
  report.metrics["C_fit"] = Cg;
  report.metrics["C_envelope"] = Cmax;
  report.metrics["C_spread"] = spread;
  report.metrics["monotone"] = monotone;
  report.metrics["quantum_grid_points"] = pts;
  report.add_check("kac ladder exact", exact_h, "h = hbar / N with the mean-field potential recovered");
  report.notes.push_back("combined error = classical max-panel error + quantum max-panel error");
  if (report.errors.size() >= 4) report.fit_errors(0.0);
  verify_reference(ref, setup, detail::smallest_above(report.errors, 0.0), report, ctx);
  return report;
}

}  // namespace mfl::lab
