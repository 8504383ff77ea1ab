#include "mfl/io/manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

#include "mfl/core/errors.hpp"
#include "mfl/io/csv.hpp"

#ifndef MFL_VERSION
#define MFL_VERSION "unknown"
#endif

namespace mfl::io {

const char* artifact_version() { return MFL_VERSION; }

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::running: return "running";
    case RunStatus::completed: return "completed";
    case RunStatus::failed: return "failed";
    case RunStatus::cancelled: return "cancelled";
  }
  return "unknown";
}

namespace {

RunStatus status_from_string(const std::string& s) {
  for (RunStatus r : {RunStatus::running, RunStatus::completed, RunStatus::failed, RunStatus::cancelled})
    if (s == to_string(r)) return r;
  throw InvalidArgument("unknown run status '" + s + "'");
}

}  // namespace

std::string file_sha256(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::string out;
  char hex[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(hex, sizeof hex, "%02x", md[i]);
    out += hex;
  }
  return out;
}

std::string iso_timestamp(std::chrono::system_clock::time_point t) {
  using namespace std::chrono;
  const auto ms = duration_cast<milliseconds>(t.time_since_epoch()).count() % 1000;
  const std::time_t tt = system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

void RunManifest::add_file(const std::filesystem::path& dir, const std::string& name) {
  FileRecord r{name, file_sha256(dir / name), std::filesystem::file_size(dir / name)};
  for (auto& f : files)
    if (f.path == name) {
      f = r;
      return;
    }
  files.push_back(r);
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json st = nlohmann::json::array(), fl = nlohmann::json::array();
  for (const auto& s : stages) st.push_back({{"name", s.name}, {"seconds", s.seconds}});
  for (const auto& f : files) fl.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return {{"experiment", experiment},
          {"config_hash", config_hash},
          {"version", version},
          {"started", started},
          {"finished", finished},
          {"status", to_string(status)},
          {"complete", complete},
          {"report_valid", report_valid},
          {"exit_code", exit_code},
          {"error", error},
          {"error_stage", error_stage},
          {"stages", st},
          {"files", fl}};
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  m.experiment = j.at("experiment");
  m.config_hash = j.at("config_hash");
  m.version = j.at("version");
  m.started = j.at("started");
  m.finished = j.at("finished");
  m.status = status_from_string(j.at("status"));
  m.complete = j.at("complete");
  m.report_valid = j.at("report_valid");
  m.exit_code = j.at("exit_code");
  m.error = j.at("error");
  m.error_stage = j.at("error_stage");
  for (const auto& s : j.at("stages")) m.stages.push_back({s.at("name"), s.at("seconds")});
  for (const auto& f : j.at("files")) m.files.push_back({f.at("path"), f.at("sha256"), f.at("bytes")});
  return m;
}

void RunManifest::write(const std::filesystem::path& dir) const {
  // Write-then-rename so a crash never leaves a truncated manifest.
  const auto tmp = dir / "manifest.json.tmp";
  write_text(tmp, to_json().dump(1) + "\n");
  std::filesystem::rename(tmp, dir / "manifest.json");
}

}  // namespace mfl::io
