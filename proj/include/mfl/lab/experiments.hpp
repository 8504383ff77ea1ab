#pragma once

#include <cstdint>
#include <vector>

#include "mfl/classical/monokinetic.hpp"
#include "mfl/lab/report.hpp"
#include "mfl/lab/setup.hpp"

namespace mfl::lab {

/// Classical particles against the hydro reference: e(N) = max_F |<mu^N(t), F> - <f(t), F>|.
struct NRateConfig {
  std::vector<int> ladder{64, 256, 1024, 4096};
  classical::InitMode mode = classical::InitMode::quantile;
  classical::Scheme scheme = classical::Scheme::yoshida4;
  double dt = 0.01;
  TimeSpec time;
  /// Monte Carlo replicas use seeds seed, seed + 1, ...
  int seeds = 16;
  std::uint64_t seed = 1;
  /// Reference markers; its scheme and dt follow the ensemble.
  int reference_markers = 2048;
  bool verify_reference = true;
  double error_floor = 1e-12;

  nlohmann::json to_json() const;
};

ExperimentReport n_rate_experiment(const ProblemSetup& setup, const NRateConfig& config, const RunContext& ctx = {});

/// Hartree evolution of the WKB state, Wigner pairings against the hydro reference.
struct HRateConfig {
  std::vector<double> ladder{0.2, 0.1, 0.05, 0.025};
  TimeSpec time;
  double dt = 0.002;
  int max_points = 1 << 14;
  ReferenceConfig reference;
  double error_floor = 1e-12;

  nlohmann::json to_json() const;
};

ExperimentReport h_rate_experiment(const ProblemSetup& setup, const HRateConfig& config, const RunContext& ctx = {});

/// Kac path: lambda = N, h = hbar / N; combined error e_cl(N) + e_q(h).
struct KacConfig {
  double hbar = 1.0;
  std::vector<int> ladder{64, 128, 256, 512, 1024};
  TimeSpec time;
  classical::InitMode mode = classical::InitMode::quantile;
  classical::Scheme scheme = classical::Scheme::yoshida4;
  double classical_dt = 0.01;
  double quantum_dt = 0.002;
  int max_points = 1 << 15;
  ReferenceConfig reference;
  /// Allowed relative spread of C_k = combined / (h + 1/N) about their geometric mean.
  double stability_tolerance = 0.5;

  nlohmann::json to_json() const;
};

ExperimentReport coupled_kac_experiment(const ProblemSetup& setup, const KacConfig& config,
                                        const RunContext& ctx = {});

/// Tangent-flow blocks for particles at fixed mass fractions.
struct SensitivityConfig {
  std::vector<int> ladder{8, 32, 128, 512};
  classical::InitMode mode = classical::InitMode::quantile;
  classical::Scheme scheme = classical::Scheme::verlet;
  double dt = 0.01;
  TimeSpec time;
  std::vector<double> mass_fractions{0.3, 0.5, 0.7};
  /// Pullback time s = pullback_fraction * t.
  double pullback_fraction = 0.5;
  std::uint64_t seed = 1;

  nlohmann::json to_json() const;
};

ExperimentReport sensitivity_scaling_experiment(const ProblemSetup& setup, const SensitivityConfig& config,
                                                const RunContext& ctx = {});

/// Wigner function of the mixed WKB state against its limit |a(x, v)|^2 (t = 0).
struct MixedConfig {
  std::vector<double> ladder{0.2, 0.1, 0.05, 0.025};
  double momentum_center = 0.0;
  double momentum_stddev = 0.3;
  int nodes = 49;
  double support_sigmas = 6.0;
  int max_points = 1 << 14;
  double error_floor = 1e-12;

  nlohmann::json to_json() const;
};

ExperimentReport mixed_state_experiment(const ProblemSetup& setup, const MixedConfig& config,
                                        const RunContext& ctx = {});

/// Grenier system (h term on) against Hartree, refining dt and the grid until
/// the L2 discrepancy meets the tolerance.
struct DecompositionConfig {
  double h = 0.1;
  TimeSpec time;
  double hartree_dt = 0.002;
  /// Grenier step as a fraction of its stability limit.
  double cfl_fraction = 0.5;
  /// 0 picks the resolution rule's point count.
  int points = 0;
  int max_levels = 5;
  double tolerance = 1e-6;

  nlohmann::json to_json() const;
};

ExperimentReport decomposition_experiment(const ProblemSetup& setup, const DecompositionConfig& config,
                                          const RunContext& ctx = {});

/// Lagrangian hydro vs particle-in-cell Vlasov on the same monokinetic data,
/// plus the free-flow caustic of sigma = -x^2/2.
struct EquivalenceConfig {
  TimeSpec time;
  int markers = 1024;
  double dt = 0.005;
  int field_points = 2048;
  double field_margin = 2.0;
  int caustic_markers = 512;
  double caustic_dt = 0.001;

  nlohmann::json to_json() const;
};

ExperimentReport equivalence_experiment(const ProblemSetup& setup, const EquivalenceConfig& config,
                                        const RunContext& ctx = {});

}  // namespace mfl::lab
