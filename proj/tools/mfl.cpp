// mfl: mean-field / semiclassical limit lab.
//   mfl run --config cfg.json [--threads N] [--output-dir DIR] [--seed S]
//   mfl validate-config --config cfg.json | --defaults
//   mfl list-experiments
//   mfl self-test

#include <atomic>
#include <csignal>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "mfl/io/config.hpp"
#include "mfl/io/run.hpp"
#include "mfl/io/self_test.hpp"

namespace {

std::atomic<bool> g_cancel{false};

extern "C" void on_sigint(int) { g_cancel.store(true); }

mfl::io::RunConfig load(const std::string& path) {
  if (path.empty()) return mfl::io::config_from_json(nlohmann::json::object());
  return mfl::io::parse_config(path);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace mfl::io;
  CLI::App app{"Mean-field and semiclassical limit experiments"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  int threads = -1;
  long long seed = -1;
  bool quiet = false;

  auto* run_cmd = app.add_subcommand("run", "run the configured experiment");
  run_cmd->add_option("--config", config_path, "JSON config (defaults when omitted)");
  run_cmd->add_option("--threads", threads, "worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--output-dir", output_dir, "output root (overrides output_dir)");
  run_cmd->add_option("--seed", seed, "base seed")->check(CLI::NonNegativeNumber);
  run_cmd->add_flag("--quiet", quiet, "no progress log");

  bool print_defaults = false;
  auto* validate_cmd = app.add_subcommand("validate-config", "check a config and print it with defaults filled");
  validate_cmd->add_option("--config", config_path, "JSON config");
  validate_cmd->add_flag("--defaults", print_defaults, "print the default config");

  auto* list_cmd = app.add_subcommand("list-experiments", "list experiment kinds");
  auto* self_cmd = app.add_subcommand("self-test", "run the quick example suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_internal;
  }

  if (*list_cmd) {
    for (const auto& e : experiment_catalog()) std::printf("%-20s %s\n", e.name, e.description);
    return exit_ok;
  }

  if (*self_cmd) {
    const auto results = run_self_tests([](const SelfTestResult& r) {
      std::printf("%s  %-42s %s (%.2fs)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(), r.seconds);
      std::fflush(stdout);
    });
    int failed = 0;
    for (const auto& r : results) failed += !r.passed;
    std::printf("%zu checks, %d failed\n", results.size(), failed);
    return failed ? exit_report_invalid : exit_ok;
  }

  RunConfig config;
  try {
    if (*validate_cmd && print_defaults) {
      std::cout << RunConfig{}.to_json().dump(2) << "\n";
      return exit_ok;
    }
    if (*validate_cmd && config_path.empty()) {
      std::fprintf(stderr, "validate-config needs --config or --defaults\n");
      return exit_internal;
    }
    config = load(config_path);
    if (threads >= 0) config.threads = threads;
    if (seed >= 0) {
      nlohmann::json j = config.to_json();
      j["seed"] = seed;
      config = config_from_json(j);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_config;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_config;
  }

  if (*validate_cmd) {
    std::cout << config.to_json().dump(2) << "\n";
    std::fprintf(stderr, "valid; config hash %s\n", config.hash().c_str());
    return exit_ok;
  }

  std::signal(SIGINT, on_sigint);
  RunOptions opts;
  opts.output_dir = output_dir;
  opts.cancel = &g_cancel;
  if (!quiet) opts.log = [](const std::string& m) { std::fprintf(stderr, "[mfl] %s\n", m.c_str()); };
  const auto r = run(config, opts);
  const auto& m = r.manifest;
  std::printf("experiment %s  status %s  exit %d\n", m.experiment.c_str(), to_string(m.status), r.exit_code);
  std::printf("output     %s\n", r.directory.string().c_str());
  if (r.report && r.report->fit)
    std::printf("slope      %s (residual %s)\n", mfl::lab::format_number(r.report->fit->slope).c_str(),
                mfl::lab::format_number(r.report->fit->residual).c_str());
  if (!m.error.empty()) std::fprintf(stderr, "error: %s\n", m.error.c_str());
  return r.exit_code;
}
