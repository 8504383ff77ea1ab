#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "mfl/classical/sensitivity.hpp"
#include "mfl/core/errors.hpp"

namespace mfl::lab {

nlohmann::json SensitivityConfig::to_json() const {
  return {{"ladder", ladder},
          {"mode", classical::to_string(mode)},
          {"scheme", classical::to_string(scheme)},
          {"dt", dt},
          {"time", time.to_json()},
          {"mass_fractions", mass_fractions},
          {"pullback_fraction", pullback_fraction},
          {"seed", seed}};
}

ExperimentReport sensitivity_scaling_experiment(const ProblemSetup& setup, const SensitivityConfig& config,
                                                const RunContext& ctx) {
  if (config.ladder.empty()) throw InvalidArgument("sensitivity ladder is empty");
  if (config.mass_fractions.empty()) throw InvalidArgument("sensitivity needs at least one mass fraction");
  ExperimentReport report;
  report.experiment = "sensitivity_scaling";
  report.parameter_name = "N";
  report.regime = "tangent-linear flow, velocities slaved to grad sigma";
  report.config = {{"setup", setup.to_json()}, {"sensitivity_scaling", config.to_json()}};
  const auto window = validity_window(setup, config.time, ctx);
  const double t = window.target_time, s = config.pullback_fraction * t;
  report.metrics["caustic_time"] = window.caustic_found ? window.caustic_time : -1.0;
  report.metrics["time"] = t;
  report.metrics["pullback_time"] = s;

  const auto phi = setup.phi();
  classical::FlowOptions fo;
  fo.scheme = config.scheme;
  fo.track_energy = false;
  fo.pool = ctx.pool;
  fo.cancel = ctx.cancel;
  std::vector<double> diag, pull_off, pull_diag;
  nlohmann::json idx_j = nlohmann::json::array();
  for (int N : config.ladder) {
    ctx.check_cancel();
    classical::MonokineticOptions mo;
    mo.mode = config.mode;
    mo.seed = config.seed;
    const auto state = classical::monokinetic_init(setup.density, setup.phase, N, mo);
    std::vector<int> idx;
    for (double f : config.mass_fractions) {
      if (!(f >= 0.0 && f < 1.0)) throw InvalidArgument("mass fractions must lie in [0, 1)");
      idx.push_back(std::min(N - 1, static_cast<int>(std::floor(f * N))));
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    idx_j.push_back(idx);
    const auto b = classical::sensitivity_blocks(state, phi, setup.phase, t, config.dt, idx, fo);
    const auto p = classical::pullback_momentum_sensitivity(state, phi, setup.phase, t, s, config.dt, idx, fo);
    const double off = b.max_off_diagonal();
    report.ladder.push_back(N);
    report.errors.push_back(off);
    diag.push_back(b.max_diagonal());
    pull_off.push_back(p.max_off_diagonal());
    pull_diag.push_back(p.max_diagonal());
    report.entries.push_back({double(N), -1, "max_off_diagonal", t, off, 0.0});
    report.entries.push_back({double(N), -1, "max_diagonal", t, diag.back(), 0.0});
    report.entries.push_back({double(N), -1, "pullback_max_off_diagonal", t, pull_off.back(), 0.0});
    report.entries.push_back({double(N), -1, "pullback_max_diagonal", t, pull_diag.back(), 0.0});
    ctx.info("sensitivity N=" + std::to_string(N) + " off " + format_number(off) + " diag " +
             format_number(diag.back()));
  }
  const auto [dmin, dmax] = std::minmax_element(diag.begin(), diag.end());
  report.metrics["indices"] = idx_j;
  report.metrics["max_diagonal"] = diag;
  report.metrics["diagonal_ratio"] = *dmin > 0.0 ? *dmax / *dmin : INFINITY;
  report.metrics["pullback_max_off_diagonal"] = pull_off;
  report.metrics["pullback_max_diagonal"] = pull_diag;
  const double floor = 1e-14;
  report.fit_errors(floor);
  if (!report.fit && phi.is_zero_force()) report.notes.push_back("zero force: off-diagonal blocks vanish");
  int above = 0;
  for (double x : pull_off) above += x > floor;
  if (above >= 4) {
    const auto f = fit_slope(report.ladder, pull_off);
    report.metrics["pullback_slope"] = f.slope;
  }
  return report;
}

}  // namespace mfl::lab
