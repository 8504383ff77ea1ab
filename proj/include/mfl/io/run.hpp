#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "mfl/io/config.hpp"
#include "mfl/io/manifest.hpp"
#include "mfl/lab/report.hpp"

namespace mfl::io {

/// CLI exit codes.
enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_config = 2,
  exit_solver_abort = 3,
  exit_report_invalid = 4,
  exit_cancelled = 130
};

/// Environment variable prefixed to a relative output_dir.
inline constexpr const char* output_root_env = "MFL_OUTPUT_ROOT";

struct RunOptions {
  /// Replaces config.output_dir when non-empty (still subject to the env root
  /// when relative).
  std::filesystem::path output_dir;
  const std::atomic<bool>* cancel = nullptr;
  std::function<void(const std::string&)> log;
};

struct RunResult {
  std::filesystem::path directory;
  RunManifest manifest;
  std::optional<lab::ExperimentReport> report;
  int exit_code = exit_internal;
};

/// <root>/<experiment>-<first 12 hex digits of the config hash>.
std::filesystem::path run_directory(const RunConfig& config, const std::filesystem::path& override_dir = {});

/// Runs the configured experiment and writes config.json, report.json,
/// errors.csv, summary.csv (plus solver tables for single runs) and
/// manifest.json. Never throws for solver or config failures: they end up in
/// the manifest and the exit code, and files written so far are kept.
RunResult run(const RunConfig& config, const RunOptions& options = {});

/// Single-solver runs; exposed for tests. Extra tables go to `dir`.
lab::ExperimentReport hydro_run(const RunConfig& config, const std::filesystem::path& dir, RunManifest& manifest,
                                const lab::RunContext& ctx);
lab::ExperimentReport hartree_run(const RunConfig& config, const std::filesystem::path& dir, RunManifest& manifest,
                                  const lab::RunContext& ctx);

}  // namespace mfl::io
