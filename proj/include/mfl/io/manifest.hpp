#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace mfl::io {

enum class RunStatus { running, completed, failed, cancelled };
const char* to_string(RunStatus s);

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};

struct FileRecord {
  /// Relative to the run directory.
  std::string path;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// Written at start (incomplete) and rewritten when the run ends, so an
/// interrupted run leaves a manifest with complete = false.
struct RunManifest {
  std::string experiment;
  std::string config_hash;
  std::string version;
  std::string started;
  std::string finished;
  RunStatus status = RunStatus::running;
  bool complete = false;
  bool report_valid = false;
  int exit_code = -1;
  std::string error;
  std::string error_stage;
  std::vector<StageTiming> stages;
  std::vector<FileRecord> files;

  /// Checksums `dir / name` and records it (replacing an earlier record).
  void add_file(const std::filesystem::path& dir, const std::string& name);
  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
  void write(const std::filesystem::path& dir) const;
};

/// Build version string.
const char* artifact_version();
std::string file_sha256(const std::filesystem::path& path);
/// UTC, ISO 8601 with milliseconds.
std::string iso_timestamp(std::chrono::system_clock::time_point t);

}  // namespace mfl::io
