#pragma once

#include <atomic>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"
#include "mfl/classical/integrator.hpp"
#include "mfl/core/potential.hpp"
#include "mfl/core/profiles.hpp"
#include "mfl/core/test_panel.hpp"
#include "mfl/core/thread_pool.hpp"
#include "mfl/kinetic/hydro.hpp"
#include "mfl/lab/report.hpp"

namespace mfl::lab {

struct RunContext {
  ThreadPool* pool = nullptr;
  const std::atomic<bool>* cancel = nullptr;
  std::function<void(const std::string&)> log;

  void info(const std::string& msg) const {
    if (log) log(msg);
  }
  void check_cancel() const;
};

struct PotentialSpec {
  PotentialKind kind = PotentialKind::gaussian;
  double amplitude = 1.0;
  double width = 1.0;

  TwoBodyPotential build(int dim) const;
};

/// The shared initial-value problem: pair potential, WKB data
/// a = sqrt(rho) exp(i chirp x^2 / 2), sigma, and the periodic quantum box.
struct ProblemSetup {
  int dim = 1;
  PotentialSpec potential;
  GaussianDensity density = GaussianDensity::isotropic(1, 0.0, std::sqrt(0.5));
  PhaseProfile phase = PhaseProfile::sine(0.2, 1.0);
  double chirp = 0.5;
  double box_length = 4.0 * std::numbers::pi;
  double resolution_safety = 0.5;

  TwoBodyPotential phi() const { return potential.build(dim); }
  AmplitudeProfile amplitude() const { return {density, chirp}; }
  TestFunctionPanel panel() const { return default_test_panel(dim); }
  /// sup |sigma'| over the quantum box.
  double max_momentum() const;
  nlohmann::json to_json() const;
};

/// Absolute t_final when >= 0, otherwise caustic_fraction * T with T the
/// extrapolated caustic time of the hydro probe.
struct TimeSpec {
  double t_final = -1.0;
  double caustic_fraction = 0.5;
  int probe_markers = 1024;
  double probe_dt = 0.005;
  double probe_t_max = 20.0;

  nlohmann::json to_json() const;
};

struct ValidityWindow {
  double caustic_time = 0.0;
  bool caustic_found = false;
  double target_time = 0.0;
  kinetic::CausticReport report;
};

ValidityWindow validity_window(const ProblemSetup& setup, const TimeSpec& time, const RunContext& ctx = {});

struct ReferenceConfig {
  int markers = 1024;
  double dt = 0.005;
  classical::Scheme scheme = classical::Scheme::yoshida4;
  /// Recompute with 2x markers and dt/2 and compare.
  bool verify = true;

  nlohmann::json to_json() const;
};

/// Lagrangian hydro solution at the target time with its panel pairings.
struct ReferenceSolution {
  kinetic::DensityField field;
  ReferenceConfig config;
  double time = 0.0;
  std::string provenance;
  std::vector<double> pairings;
  /// max |pairing change| under refinement; negative when not verified.
  double refinement_change = -1.0;
};

ReferenceSolution hydro_reference(const ProblemSetup& setup, double t, const ReferenceConfig& config,
                                  const RunContext& ctx = {});

/// Refines the reference and records the change; adds the validity check
/// "reference self-consistency" (change < 10% of the smallest ladder error).
void verify_reference(ReferenceSolution& ref, const ProblemSetup& setup, double smallest_error,
                      ExperimentReport& report, const RunContext& ctx = {});

std::vector<double> panel_pairings(const kinetic::DensityField& field, const TestFunctionPanel& panel);

}  // namespace mfl::lab
