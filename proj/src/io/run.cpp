#include "mfl/io/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <memory>

#include "mfl/core/thread_pool.hpp"
#include "mfl/io/csv.hpp"
#include "mfl/kinetic/hydro.hpp"
#include "mfl/quantum/hartree.hpp"
#include "mfl/quantum/wigner.hpp"

namespace mfl::io {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

fs::path run_directory(const RunConfig& config, const fs::path& override_dir) {
  fs::path root = override_dir.empty() ? fs::path(config.output_dir) : override_dir;
  if (root.is_relative())
    if (const char* env = std::getenv(output_root_env); env && *env) root = fs::path(env) / root;
  return root / (std::string(to_string(config.experiment)) + "-" + config.hash().substr(0, 12));
}

namespace {

/// Tracks the current stage for error context and per-stage wall clock.
struct StageClock {
  RunManifest& manifest;
  std::string current;
  Clock::time_point start;

  void begin(std::string name) {
    end();
    current = std::move(name);
    start = Clock::now();
  }
  void end() {
    if (current.empty()) return;
    manifest.stages.push_back({current, std::chrono::duration<double>(Clock::now() - start).count()});
    current.clear();
  }
};

void write_table(const fs::path& dir, const std::string& name, const CsvTable& t, RunManifest& m) {
  write_text(dir / name, t.str());
  m.add_file(dir, name);
}

}  // namespace

lab::ExperimentReport hydro_run(const RunConfig& config, const fs::path& dir, RunManifest& manifest,
                                const lab::RunContext& ctx) {
  const auto& setup = config.setup;
  lab::ExperimentReport report;
  report.experiment = "hydro";
  report.parameter_name = "t";
  report.regime = "Lagrangian pressureless Euler";
  double t = config.time.t_final;
  if (t < 0.0) {
    const auto w = lab::validity_window(setup, config.time, ctx);
    t = w.target_time;
    report.metrics["caustic_time"] = w.caustic_time;
  }
  report.metrics["time"] = t;
  const auto init = kinetic::make_density_field(setup.density, setup.phase, config.single.markers);
  kinetic::HydroOptions o;
  o.scheme = classical::Scheme::yoshida4;
  o.throw_on_caustic = true;
  o.pool = ctx.pool;
  o.cancel = ctx.cancel;
  const auto phi = setup.phi();
  const auto res = kinetic::hydro_lagrangian_solve(init, phi, t, config.single.dt, o);
  ctx.check_cancel();
  const auto& f = res.field;
  const auto panel = setup.panel();
  const auto pairings = lab::panel_pairings(f, panel);
  const auto ids = panel.ids();
  nlohmann::json pj = nlohmann::json::object();
  for (size_t i = 0; i < ids.size(); ++i) pj[ids[i]] = pairings[i];
  report.metrics["pairings"] = pj;
  report.metrics["steps"] = res.steps;
  report.metrics["min_jacobian"] = f.min_jacobian();
  const double mass_error = std::abs(f.total_mass() - 1.0);
  report.metrics["mass_error"] = mass_error;
  report.add_check("mass conservation", mass_error <= 1e-12, "|total mass - 1| = " + lab::format_number(mass_error));

  write_table(dir, "markers.csv", marker_table(f), manifest);
  if (setup.dim == 1) {
    double lo = f.positions.front(), hi = lo;
    for (double x : f.positions) lo = std::min(lo, x), hi = std::max(hi, x);
    const double pad = 0.05 * (hi - lo);
    const auto grid = SpatialGrid::line(lo - pad, hi + pad, config.single.snapshot_points, false);
    write_table(dir, "snapshot.csv", snapshot_table(kinetic::sample_eulerian(f, phi, grid)), manifest);
  } else {
    report.notes.push_back("Eulerian snapshot skipped: one-dimensional only");
  }
  return report;
}

lab::ExperimentReport hartree_run(const RunConfig& config, const fs::path& dir, RunManifest& manifest,
                                  const lab::RunContext& ctx) {
  const auto& setup = config.setup;
  if (setup.dim != 1) throw InvalidArgument("hartree runs are one-dimensional (domain.dim = 1)");
  const double h = config.single.h;
  lab::ExperimentReport report;
  report.experiment = "hartree";
  report.parameter_name = "h";
  report.regime = "Hartree evolution of a WKB state";
  double t = config.time.t_final;
  if (t < 0.0) {
    const auto w = lab::validity_window(setup, config.time, ctx);
    t = w.target_time;
    report.metrics["caustic_time"] = w.caustic_time;
  }
  report.metrics["time"] = t;
  const int n = quantum::resolve_points(setup.box_length, h, setup.max_momentum(), setup.resolution_safety);
  const auto grid = quantum::periodic_line(setup.box_length, n);
  auto psi = quantum::wkb_initialize(setup.amplitude(), setup.phase, h, grid, setup.resolution_safety);
  const double n0 = psi.norm();
  quantum::HartreeSolver solver(setup.phi(), grid, h);
  const int steps = t > 0.0 ? static_cast<int>(std::ceil(t / config.single.dt - 1e-12)) : 0;
  solver.evolve(psi, t, config.single.dt, ctx.cancel);
  ctx.check_cancel();
  const double drift = std::abs(psi.norm() - n0);
  report.metrics["grid_points"] = n;
  report.metrics["steps"] = steps;
  report.metrics["norm_drift"] = drift;
  report.metrics["boundary_mass"] = quantum::boundary_mass(psi);
  report.add_check("norm drift", drift <= 1e-12 * std::max(steps, 1),
                   "|norm - norm0| = " + lab::format_number(drift) + " over " + std::to_string(steps) + " steps");

  quantum::WignerOptions wo;
  wo.pool = ctx.pool;
  const auto panel = setup.panel();
  const auto pw = quantum::wigner_pairings(psi, panel, wo);
  const auto ids = panel.ids();
  nlohmann::json pj = nlohmann::json::object();
  for (size_t i = 0; i < ids.size(); ++i) pj[ids[i]] = pw.values[i];
  report.metrics["pairings"] = pj;
  report.metrics["wigner_normalization"] = pw.normalization;
  report.metrics["wigner_edge_mass"] = pw.edge_mass;

  write_table(dir, "wave.csv", wave_table(psi), manifest);
  wo.x_stride = config.single.wigner_stride;
  wo.v_limit = config.single.wigner_v_limit;
  const auto f = quantum::wigner_transform(psi, wo);
  report.metrics["wigner_imaginary_residue"] = f.imaginary_residue;
  report.add_check("wigner realness", f.imaginary_residue <= 1e-10,
                   "max |Im| / max |Re| = " + lab::format_number(f.imaginary_residue));
  write_table(dir, "wigner.csv", wigner_table(f), manifest);
  return report;
}

namespace {

lab::ExperimentReport dispatch(const RunConfig& c, const fs::path& dir, RunManifest& m, const lab::RunContext& ctx) {
  switch (c.experiment) {
    case ExperimentKind::n_rate: return lab::n_rate_experiment(c.setup, c.n_rate, ctx);
    case ExperimentKind::h_rate: return lab::h_rate_experiment(c.setup, c.h_rate, ctx);
    case ExperimentKind::coupled_kac: return lab::coupled_kac_experiment(c.setup, c.coupled_kac, ctx);
    case ExperimentKind::sensitivity_scaling:
      return lab::sensitivity_scaling_experiment(c.setup, c.sensitivity_scaling, ctx);
    case ExperimentKind::mixed_state: return lab::mixed_state_experiment(c.setup, c.mixed_state, ctx);
    case ExperimentKind::decomposition: return lab::decomposition_experiment(c.setup, c.decomposition, ctx);
    case ExperimentKind::equivalence: return lab::equivalence_experiment(c.setup, c.equivalence, ctx);
    case ExperimentKind::hydro: return hydro_run(c, dir, m, ctx);
    case ExperimentKind::hartree: return hartree_run(c, dir, m, ctx);
  }
  throw InvalidArgument("unhandled experiment");
}

int classify(std::exception_ptr e, std::string& message) {
  try {
    std::rethrow_exception(e);
  } catch (const Cancelled& x) {
    message = x.what();
    return exit_cancelled;
  } catch (const CausticError& x) {
    message = std::string(x.what()) + " (estimated caustic time " + lab::format_number(x.estimated_time()) + ")";
    return exit_solver_abort;
  } catch (const DivergenceError& x) {
    message = x.what();
    return exit_solver_abort;
  } catch (const ResolutionError& x) {
    message = std::string(x.what()) + " (required spacing " + lab::format_number(x.required_spacing()) + ")";
    return exit_solver_abort;
  } catch (const AliasingError& x) {
    message = x.what();
    return exit_solver_abort;
  } catch (const DomainError& x) {
    message = x.what();
    return exit_solver_abort;
  } catch (const InvalidArgument& x) {
    message = x.what();
    return exit_config;
  } catch (const std::exception& x) {
    message = x.what();
    return exit_internal;
  }
}

}  // namespace

RunResult run(const RunConfig& config, const RunOptions& options) {
  RunResult result;
  result.directory = run_directory(config, options.output_dir);
  const fs::path& dir = result.directory;
  fs::create_directories(dir);
  for (const char* stale : {"report.json", "errors.csv", "summary.csv", "markers.csv", "snapshot.csv", "wave.csv",
                            "wigner.csv", "manifest.json"})
    fs::remove(dir / stale);

  RunManifest& m = result.manifest;
  m.experiment = to_string(config.experiment);
  m.config_hash = config.hash();
  m.version = artifact_version();
  m.started = iso_timestamp(std::chrono::system_clock::now());
  StageClock clock{m, {}, {}};

  auto finish = [&](RunStatus status, int code) {
    clock.end();
    m.status = status;
    m.exit_code = code;
    m.complete = status == RunStatus::completed;
    m.finished = iso_timestamp(std::chrono::system_clock::now());
    m.write(dir);
    result.exit_code = code;
    return result;
  };

  try {
    clock.begin("config");
    write_text(dir / "config.json", config.to_json().dump(1) + "\n");
    m.add_file(dir, "config.json");
    m.write(dir);

    const int threads = config.threads > 0 ? config.threads : default_thread_count();
    std::unique_ptr<ThreadPool> pool = threads > 1 ? std::make_unique<ThreadPool>(threads) : nullptr;
    lab::RunContext ctx;
    ctx.pool = pool.get();
    ctx.cancel = options.cancel;
    ctx.log = options.log;

    clock.begin(to_string(config.experiment));
    const auto t0 = Clock::now();
    auto report = dispatch(config, dir, m, ctx);
    report.wall_clock_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    // Embed the hashed configuration (threads and output_dir do not change results).
    nlohmann::json embedded = config.to_json();
    embedded.erase("threads");
    embedded.erase("output_dir");
    report.config = embedded;
    report.config_hash = m.config_hash;

    clock.begin("outputs");
    write_text(dir / "report.json", report.to_json().dump(1) + "\n");
    m.add_file(dir, "report.json");
    write_table(dir, "errors.csv", error_table(report), m);
    write_table(dir, "summary.csv", summary_table(report), m);
    m.report_valid = report.valid();
    if (!m.report_valid) {
      for (const auto& c : report.checks)
        if (!c.passed) m.error += (m.error.empty() ? "" : "; ") + c.name + ": " + c.detail;
      m.error_stage = "report";
    }
    result.report = std::move(report);
    return finish(RunStatus::completed, m.report_valid ? exit_ok : exit_report_invalid);
  } catch (...) {
    std::string message;
    const int code = classify(std::current_exception(), message);
    m.error_stage = clock.current;
    m.error = clock.current + ": " + message;
    try {
      return finish(code == exit_cancelled ? RunStatus::cancelled : RunStatus::failed, code);
    } catch (const std::exception&) {
      result.exit_code = code;
      return result;
    }
  }
}

}  // namespace mfl::io
