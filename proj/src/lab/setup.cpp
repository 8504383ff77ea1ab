#include "mfl/lab/setup.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mfl/core/errors.hpp"
#include "mfl/lab/report.hpp"

namespace mfl::lab {

void RunContext::check_cancel() const {
  if (cancel && cancel->load()) throw Cancelled();
}

TwoBodyPotential PotentialSpec::build(int dim) const {
  switch (kind) {
    case PotentialKind::zero: return TwoBodyPotential::zero(dim);
    case PotentialKind::constant: return TwoBodyPotential::constant(dim, amplitude);
    case PotentialKind::gaussian: return make_gaussian_potential(amplitude, width, dim);
    case PotentialKind::harmonic: return TwoBodyPotential::harmonic(dim, amplitude);
  }
  throw InvalidArgument("unknown potential kind");
}

double ProblemSetup::max_momentum() const { return phase.max_gradient(dim, 0.5 * box_length); }

nlohmann::json ProblemSetup::to_json() const {
  return {{"dim", dim},
          {"potential", {{"kind", to_string(potential.kind)}, {"amplitude", potential.amplitude}, {"width", potential.width}}},
          {"density", {{"center", density.center}, {"stddev", density.stddev}}},
          {"phase",
           {{"drift", phase.drift},
            {"sine_amplitude", phase.sine_amplitude},
            {"sine_wavenumber", phase.sine_wavenumber},
            {"curvature", phase.curvature}}},
          {"chirp", chirp},
          {"box_length", box_length},
          {"resolution_safety", resolution_safety}};
}

nlohmann::json TimeSpec::to_json() const {
  return {{"t_final", t_final},
          {"caustic_fraction", caustic_fraction},
          {"probe_markers", probe_markers},
          {"probe_dt", probe_dt},
          {"probe_t_max", probe_t_max}};
}

nlohmann::json ReferenceConfig::to_json() const {
  return {{"markers", markers}, {"dt", dt}, {"scheme", classical::to_string(scheme)}, {"verify", verify}};
}

ValidityWindow validity_window(const ProblemSetup& setup, const TimeSpec& time, const RunContext& ctx) {
  ValidityWindow w;
  const auto init = kinetic::make_density_field(setup.density, setup.phase, time.probe_markers);
  kinetic::HydroOptions o;
  o.scheme = classical::Scheme::yoshida4;
  o.track_phase = false;
  o.pool = ctx.pool;
  o.cancel = ctx.cancel;
  w.report = kinetic::find_caustic(init, setup.phi(), time.probe_t_max, time.probe_dt, o);
  w.caustic_found = w.report.detected;
  w.caustic_time = w.caustic_found ? w.report.estimated_time : std::numeric_limits<double>::infinity();
  if (time.t_final >= 0.0) {
    if (w.caustic_found && time.t_final >= w.caustic_time)
      throw InvalidArgument("t_final " + format_number(time.t_final) + " lies beyond the caustic time " +
                            format_number(w.caustic_time));
    w.target_time = time.t_final;
  } else {
    if (!w.caustic_found)
      throw InvalidArgument("no caustic before t=" + format_number(time.probe_t_max) +
                            "; give an absolute t_final instead of a caustic fraction");
    if (!(time.caustic_fraction >= 0.0 && time.caustic_fraction < 1.0))
      throw InvalidArgument("caustic_fraction must lie in [0, 1)");
    w.target_time = time.caustic_fraction * w.caustic_time;
  }
  ctx.info("validity window: T = " + format_number(w.caustic_time) + ", target t = " + format_number(w.target_time));
  return w;
}

std::vector<double> panel_pairings(const kinetic::DensityField& field, const TestFunctionPanel& panel) {
  std::vector<double> out;
  out.reserve(panel.size());
  for (const auto& F : panel) out.push_back(kinetic::monokinetic_pairing(field, F));
  return out;
}

namespace {

kinetic::DensityField solve_reference(const ProblemSetup& setup, double t, int markers, double dt,
                                      classical::Scheme scheme, const RunContext& ctx) {
  int per_axis = markers;
  if (setup.dim > 1) {
    per_axis = static_cast<int>(std::lround(std::pow(markers, 1.0 / setup.dim)));
    if (std::lround(std::pow(per_axis, setup.dim)) != markers)
      throw InvalidArgument("reference marker count must be a perfect power of the dimension");
  }
  const auto init = kinetic::make_density_field(setup.density, setup.phase, per_axis);
  kinetic::HydroOptions o;
  o.scheme = scheme;
  o.track_phase = false;
  o.throw_on_caustic = true;
  o.pool = ctx.pool;
  o.cancel = ctx.cancel;
  return kinetic::hydro_lagrangian_solve(init, setup.phi(), t, dt, o).field;
}

}  // namespace

ReferenceSolution hydro_reference(const ProblemSetup& setup, double t, const ReferenceConfig& config,
                                  const RunContext& ctx) {
  ReferenceSolution ref;
  ref.config = config;
  ref.time = t;
  ref.field = solve_reference(setup, t, config.markers, config.dt, config.scheme, ctx);
  ref.pairings = panel_pairings(ref.field, setup.panel());
  std::ostringstream p;
  p << "lagrangian-hydro markers=" << config.markers << " dt=" << config.dt
    << " scheme=" << classical::to_string(config.scheme);
  ref.provenance = p.str();
  return ref;
}

void verify_reference(ReferenceSolution& ref, const ProblemSetup& setup, double smallest_error,
                      ExperimentReport& report, const RunContext& ctx) {
  if (!ref.config.verify) {
    report.notes.push_back("reference self-consistency not checked");
    return;
  }
  if (!std::isfinite(smallest_error)) {
    report.notes.push_back("reference self-consistency not checked: all errors at the floor");
    return;
  }
  const int fine_markers = ref.config.markers * (1 << setup.dim);
  const auto fine = solve_reference(setup, ref.time, fine_markers, 0.5 * ref.config.dt, ref.config.scheme, ctx);
  const auto p = panel_pairings(fine, setup.panel());
  double change = 0.0;
  for (size_t i = 0; i < p.size(); ++i) change = std::max(change, std::abs(p[i] - ref.pairings[i]));
  ref.refinement_change = change;
  report.metrics["reference"] = {{"provenance", ref.provenance},
                                 {"refinement_change", change},
                                 {"smallest_error", smallest_error},
                                 {"time", ref.time}};
  report.add_check("reference self-consistency", change < 0.1 * smallest_error,
                   "refinement change " + format_number(change) + " vs 10% of smallest error " +
                       format_number(0.1 * smallest_error));
}

}  // namespace mfl::lab
