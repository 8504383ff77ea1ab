#include "mfl/lab/report.hpp"

#include <charconv>
#include <cmath>

#include "mfl/core/errors.hpp"

namespace mfl::lab {

std::string format_number(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double ErrorEntry::error() const { return std::abs(value - reference); }

bool ExperimentReport::valid() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

void ExperimentReport::add_check(std::string name, bool passed, std::string detail) {
  checks.push_back({std::move(name), passed, std::move(detail)});
}

double ExperimentReport::add_panel_errors(double parameter, int seed, double time, const std::vector<std::string>& ids,
                                          const std::vector<double>& values, const std::vector<double>& reference) {
  if (ids.size() != values.size() || values.size() != reference.size())
    throw InvalidArgument("panel error arrays differ in length");
  double worst = 0.0;
  for (size_t p = 0; p < ids.size(); ++p) {
    entries.push_back({parameter, seed, ids[p], time, values[p], reference[p]});
    worst = std::max(worst, entries.back().error());
  }
  return worst;
}

void ExperimentReport::fit_errors(double floor) {
  std::vector<double> p, e;
  for (size_t i = 0; i < errors.size(); ++i)
    if (errors[i] > floor) {
      p.push_back(ladder[i]);
      e.push_back(errors[i]);
    }
  if (p.size() < 4) {
    fit.reset();
    notes.push_back("slope fit skipped: fewer than 4 errors above the floor " + format_number(floor));
    return;
  }
  fit = fit_slope(p, e);
}

nlohmann::json ExperimentReport::to_json() const {
  using nlohmann::json;
  json j;
  j["experiment"] = experiment;
  j["parameter"] = parameter_name;
  j["regime"] = regime;
  j["ladder"] = ladder;
  j["errors"] = errors;
  if (fit)
    j["fit"] = {{"slope", fit->slope}, {"intercept", fit->intercept}, {"residual", fit->residual}, {"points", fit->points}};
  else
    j["fit"] = nullptr;
  json rows = json::array();
  for (const auto& e : entries) {
    json r = {{"parameter", e.parameter}, {"function", e.function}, {"time", e.time},
              {"value", e.value},         {"reference", e.reference}, {"error", e.error()}};
    if (e.seed >= 0) r["seed"] = e.seed;
    rows.push_back(std::move(r));
  }
  j["entries"] = std::move(rows);
  j["metrics"] = metrics;
  json checks_j = json::array();
  for (const auto& c : checks) checks_j.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = std::move(checks_j);
  j["valid"] = valid();
  j["notes"] = notes;
  j["config"] = config;
  j["config_hash"] = config_hash;
  return j;
}

}  // namespace mfl::lab
