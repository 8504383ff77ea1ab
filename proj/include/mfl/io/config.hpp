#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mfl/core/errors.hpp"
#include "mfl/lab/experiments.hpp"

namespace mfl::io {

/// Schema violation; `key` is the dotted path of the offending entry.
class ConfigError : public InvalidArgument {
public:
  ConfigError(const std::string& key, const std::string& what)
      : InvalidArgument(key.empty() ? what : key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

enum class ExperimentKind {
  n_rate,
  h_rate,
  coupled_kac,
  sensitivity_scaling,
  mixed_state,
  decomposition,
  equivalence,
  hydro,
  hartree
};

struct ExperimentInfo {
  ExperimentKind kind;
  const char* name;
  const char* description;
};

const std::vector<ExperimentInfo>& experiment_catalog();
const char* to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& name);

/// Settings for the single-solver runs (hydro, hartree).
struct SingleRunConfig {
  double dt = 0.002;
  double h = 0.1;
  int markers = 1024;
  /// Eulerian sample points for hydro snapshots.
  int snapshot_points = 512;
  /// Keep every n-th Wigner column and |v| <= v_limit in the CSV (0 = all).
  int wigner_stride = 4;
  double wigner_v_limit = 1.5;
};

struct RunConfig {
  ExperimentKind experiment = ExperimentKind::h_rate;
  std::uint64_t seed = 1;
  /// 0 uses the hardware concurrency.
  int threads = 0;
  std::string output_dir = "runs";
  lab::ProblemSetup setup;
  lab::TimeSpec time;
  lab::NRateConfig n_rate;
  lab::HRateConfig h_rate;
  lab::KacConfig coupled_kac;
  lab::SensitivityConfig sensitivity_scaling;
  lab::MixedConfig mixed_state;
  lab::DecompositionConfig decomposition;
  lab::EquivalenceConfig equivalence;
  SingleRunConfig single;

  /// Full configuration with every default filled in.
  nlohmann::json to_json() const;
  /// SHA-256 of the canonical JSON without threads and output_dir (which do
  /// not change results).
  std::string hash() const;
};

/// Merges `doc` over the defaults; unknown keys and type mismatches are
/// rejected with their key path, then physical ranges are checked.
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig parse_config(const std::filesystem::path& path);

/// Canonical serialization (sorted keys, shortest round-trip numbers).
std::string canonical_dump(const nlohmann::json& j);
std::string sha256_hex(const std::string& data);

}  // namespace mfl::io
