#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mfl/lab/fit.hpp"

namespace mfl::lab {

/// One weak error: |value - reference| for a (parameter, test function, time)
/// triple; seed >= 0 marks Monte Carlo replicas.
struct ErrorEntry {
  double parameter = 0.0;
  int seed = -1;
  std::string function;
  double time = 0.0;
  double value = 0.0;
  double reference = 0.0;

  double error() const;
};

struct ValidityCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

/// Shortest round-trip decimal form (for messages).
std::string format_number(double x);

struct ExperimentReport {
  std::string experiment;
  /// "N", "h", "dt", ...
  std::string parameter_name;
  std::string regime;
  std::vector<double> ladder;
  /// Headline error per ladder point (max over the panel).
  std::vector<double> errors;
  std::vector<ErrorEntry> entries;
  std::optional<SlopeFit> fit;
  nlohmann::json config = nlohmann::json::object();
  std::string config_hash;
  /// Experiment-specific scalars and series.
  nlohmann::json metrics = nlohmann::json::object();
  /// Validity flags; a failed one marks the report invalid.
  std::vector<ValidityCheck> checks;
  std::vector<std::string> notes;
  /// Kept out of to_json so identical configurations give identical reports.
  double wall_clock_seconds = 0.0;

  bool valid() const;
  void add_check(std::string name, bool passed, std::string detail = {});
  /// Appends one entry per panel function and returns the largest error.
  double add_panel_errors(double parameter, int seed, double time, const std::vector<std::string>& ids,
                          const std::vector<double>& values, const std::vector<double>& reference);
  /// Fits the headline errors, skipping (with a note) when fewer than four
  /// points lie above `floor`.
  void fit_errors(double floor);

  nlohmann::json to_json() const;
};

}  // namespace mfl::lab
