#include <cmath>

#include "common.hpp"
#include "mfl/core/errors.hpp"
#include "mfl/quantum/grenier.hpp"
#include "mfl/quantum/hartree.hpp"

namespace mfl::lab {

nlohmann::json DecompositionConfig::to_json() const {
  return {{"h", h},           {"time", time.to_json()}, {"hartree_dt", hartree_dt}, {"cfl_fraction", cfl_fraction},
          {"points", points}, {"max_levels", max_levels}, {"tolerance", tolerance}};
}

namespace {

// Smallest power-of-two grid whose initial psi and amplitude carry no more
// than 1e-18 of their spectral energy in the top third of wavenumbers. The
// floor comes from the Gaussian tail cut by the periodic box and falls like 1/n.
int converged_points(const ProblemSetup& setup, double h, int start) {
  for (int n = start; n <= (1 << 14); n *= 2) {
    const auto grid = quantum::periodic_line(setup.box_length, n);
    const auto f = quantum::make_wkb_fields(setup.amplitude(), setup.phase, h, grid, setup.resolution_safety);
    const auto psi = f.reconstruct();
    quantum::SpectralOps ops(n, setup.box_length);
    std::vector<double> re(n), im(n), ar(n), ai(n);
    for (int i = 0; i < n; ++i) {
      re[i] = psi.values[i].real();
      im[i] = psi.values[i].imag();
      ar[i] = f.amplitude[i].real();
      ai[i] = f.amplitude[i].imag();
    }
    const double tail = std::max({ops.high_mode_fraction(re), ops.high_mode_fraction(im), ops.high_mode_fraction(ar),
                                  ops.high_mode_fraction(ai)});
    if (tail <= 1e-18) return n;
  }
  throw ResolutionError("no grid up to 16384 points resolves the WKB data spectrally", 0.0);
}

}  // namespace

ExperimentReport decomposition_experiment(const ProblemSetup& setup, const DecompositionConfig& config,
                                          const RunContext& ctx) {
  if (setup.dim != 1) throw InvalidArgument("the decomposition check runs in one dimension");
  if (!(config.h > 0.0)) throw InvalidArgument("h must be positive");
  if (config.max_levels < 1) throw InvalidArgument("max_levels must be at least 1");
  ExperimentReport report;
  report.experiment = "decomposition";
  report.parameter_name = "dt";
  report.regime = "Grenier system with the h term against Hartree";
  report.config = {{"setup", setup.to_json()}, {"decomposition", config.to_json()}};
  const auto window = validity_window(setup, config.time, ctx);
  const double t = window.target_time;
  report.metrics["caustic_time"] = window.caustic_found ? window.caustic_time : -1.0;
  report.metrics["time"] = t;

  const auto phi = setup.phi();
  const int start = config.points > 0 ? config.points
                                      : quantum::resolve_points(setup.box_length, config.h, setup.max_momentum(),
                                                                setup.resolution_safety);
  const int n = converged_points(setup, config.h, start);
  const auto grid = quantum::periodic_line(setup.box_length, n);
  report.metrics["grid_points"] = n;
  nlohmann::json gdt = nlohmann::json::array();
  double dt = config.hartree_dt;
  for (int level = 0; level < config.max_levels; ++level, dt *= 0.5) {
    ctx.check_cancel();
    auto f = quantum::make_wkb_fields(setup.amplitude(), setup.phase, config.h, grid, setup.resolution_safety);
    auto psi = f.reconstruct();
    quantum::GrenierSolver g(phi, grid, config.h, true);
    const double gdt_level = std::min(dt, config.cfl_fraction * g.max_stable_dt(f));
    g.evolve(f, t, gdt_level, ctx.cancel);
    quantum::HartreeSolver(phi, grid, config.h).evolve(psi, t, dt, ctx.cancel);
    const auto rec = f.reconstruct();
    double d = 0.0;
    for (int i = 0; i < n; ++i) d += std::norm(rec.values[i] - psi.values[i]);
    d = std::sqrt(d * grid.spacing(0));
    report.ladder.push_back(dt);
    report.errors.push_back(d);
    gdt.push_back(gdt_level);
    report.entries.push_back({dt, -1, "l2_discrepancy", t, d, 0.0});
    ctx.info("decomposition dt=" + format_number(dt) + " discrepancy " + format_number(d));
    if (d <= config.tolerance) break;
  }
  report.metrics["grenier_dt"] = gdt;
  report.metrics["discrepancy"] = report.errors.back();
  report.add_check("discrepancy within tolerance", report.errors.back() <= config.tolerance,
                   "final L2 discrepancy " + format_number(report.errors.back()) + " vs " +
                       format_number(config.tolerance));
  if (report.errors.size() >= 4) report.fit_errors(0.0);
  return report;
}

}  // namespace mfl::lab
