#include "mfl/io/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "mfl/core/grid.hpp"

namespace mfl::io {

using nlohmann::json;

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> c = {
      {ExperimentKind::n_rate, "n_rate", "classical N-particle weak error against the hydro reference, slope in N"},
      {ExperimentKind::h_rate, "h_rate", "Hartree + Wigner weak error against the hydro reference, slope in h"},
      {ExperimentKind::coupled_kac, "coupled_kac", "Kac path h = hbar/N: combined error against C (h + 1/N)"},
      {ExperimentKind::sensitivity_scaling, "sensitivity_scaling",
       "tangent-flow diagonal / off-diagonal blocks across an N ladder"},
      {ExperimentKind::mixed_state, "mixed_state", "mixed WKB Wigner function against |a(x,v)|^2, slope in h"},
      {ExperimentKind::decomposition, "decomposition", "Grenier system with the h term against Hartree (L2)"},
      {ExperimentKind::equivalence, "equivalence",
       "Lagrangian hydro vs particle-in-cell Vlasov pairings, free-flow caustic time"},
      {ExperimentKind::hydro, "hydro", "single run: Lagrangian hydro to t, Eulerian snapshot CSV"},
      {ExperimentKind::hartree, "hartree", "single run: Hartree to t, wavefunction and Wigner CSV"},
  };
  return c;
}

const char* to_string(ExperimentKind k) {
  for (const auto& e : experiment_catalog())
    if (e.kind == k) return e.name;
  return "unknown";
}

ExperimentKind experiment_from_string(const std::string& name) {
  for (const auto& e : experiment_catalog())
    if (name == e.name) return e.kind;
  std::string all;
  for (const auto& e : experiment_catalog()) all += std::string(all.empty() ? "" : ", ") + e.name;
  throw InvalidArgument("unknown experiment '" + name + "' (expected one of: " + all + ")");
}

namespace {

json reference_json(const lab::ReferenceConfig& r) {
  return {{"markers", r.markers}, {"dt", r.dt}, {"scheme", classical::to_string(r.scheme)}, {"verify", r.verify}};
}

}  // namespace

json RunConfig::to_json() const {
  json j;
  j["experiment"] = to_string(experiment);
  j["seed"] = seed;
  j["threads"] = threads;
  j["output_dir"] = output_dir;
  j["domain"] = {{"dim", setup.dim}, {"box_length", setup.box_length}, {"resolution_safety", setup.resolution_safety}};
  j["potential"] = {{"kind", mfl::to_string(setup.potential.kind)},
                    {"amplitude", setup.potential.amplitude},
                    {"width", setup.potential.width}};
  j["initial_data"] = {
      {"density", {{"center", setup.density.center}, {"stddev", setup.density.stddev}}},
      {"phase",
       {{"drift", setup.phase.drift},
        {"sine_amplitude", setup.phase.sine_amplitude},
        {"sine_wavenumber", setup.phase.sine_wavenumber},
        {"curvature", setup.phase.curvature}}},
      {"chirp", setup.chirp}};
  j["time"] = time.to_json();
  j["n_rate"] = {{"ladder", n_rate.ladder},
                 {"mode", classical::to_string(n_rate.mode)},
                 {"scheme", classical::to_string(n_rate.scheme)},
                 {"dt", n_rate.dt},
                 {"seeds", n_rate.seeds},
                 {"reference_markers", n_rate.reference_markers},
                 {"verify_reference", n_rate.verify_reference},
                 {"error_floor", n_rate.error_floor}};
  j["h_rate"] = {{"ladder", h_rate.ladder},
                 {"dt", h_rate.dt},
                 {"max_points", h_rate.max_points},
                 {"reference", reference_json(h_rate.reference)},
                 {"error_floor", h_rate.error_floor}};
  j["coupled_kac"] = {{"hbar", coupled_kac.hbar},
                      {"ladder", coupled_kac.ladder},
                      {"mode", classical::to_string(coupled_kac.mode)},
                      {"scheme", classical::to_string(coupled_kac.scheme)},
                      {"classical_dt", coupled_kac.classical_dt},
                      {"quantum_dt", coupled_kac.quantum_dt},
                      {"max_points", coupled_kac.max_points},
                      {"reference", reference_json(coupled_kac.reference)},
                      {"stability_tolerance", coupled_kac.stability_tolerance}};
  j["sensitivity_scaling"] = {{"ladder", sensitivity_scaling.ladder},
                              {"mode", classical::to_string(sensitivity_scaling.mode)},
                              {"scheme", classical::to_string(sensitivity_scaling.scheme)},
                              {"dt", sensitivity_scaling.dt},
                              {"mass_fractions", sensitivity_scaling.mass_fractions},
                              {"pullback_fraction", sensitivity_scaling.pullback_fraction}};
  j["mixed_state"] = {{"ladder", mixed_state.ladder},
                      {"momentum_center", mixed_state.momentum_center},
                      {"momentum_stddev", mixed_state.momentum_stddev},
                      {"nodes", mixed_state.nodes},
                      {"support_sigmas", mixed_state.support_sigmas},
                      {"max_points", mixed_state.max_points},
                      {"error_floor", mixed_state.error_floor}};
  j["decomposition"] = {{"h", decomposition.h},
                        {"hartree_dt", decomposition.hartree_dt},
                        {"cfl_fraction", decomposition.cfl_fraction},
                        {"points", decomposition.points},
                        {"max_levels", decomposition.max_levels},
                        {"tolerance", decomposition.tolerance}};
  j["equivalence"] = {{"markers", equivalence.markers},
                      {"dt", equivalence.dt},
                      {"field_points", equivalence.field_points},
                      {"field_margin", equivalence.field_margin},
                      {"caustic_markers", equivalence.caustic_markers},
                      {"caustic_dt", equivalence.caustic_dt}};
  j["single"] = {{"dt", single.dt},
                 {"h", single.h},
                 {"markers", single.markers},
                 {"snapshot_points", single.snapshot_points},
                 {"wigner_stride", single.wigner_stride},
                 {"wigner_v_limit", single.wigner_v_limit}};
  return j;
}

std::string canonical_dump(const json& j) { return j.dump(); }

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string RunConfig::hash() const {
  json j = to_json();
  j.erase("threads");
  j.erase("output_dir");
  return sha256_hex(canonical_dump(j));
}

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const char* type_name(const json& d) {
  if (d.is_boolean()) return "boolean";
  if (d.is_number_integer()) return "integer";
  if (d.is_number()) return "number";
  if (d.is_string()) return "string";
  if (d.is_array()) return "array";
  if (d.is_object()) return "object";
  return "null";
}

void check_scalar(const json& def, const json& val, const std::string& path) {
  if (def.is_boolean() && !val.is_boolean()) throw ConfigError(path, "expected boolean");
  if (def.is_number_integer() && !val.is_number_integer()) throw ConfigError(path, "expected integer");
  if (def.is_number() && !val.is_number()) throw ConfigError(path, "expected number");
  if (def.is_string() && !val.is_string()) throw ConfigError(path, "expected string");
  if (val.is_number_float() && !std::isfinite(val.get<double>())) throw ConfigError(path, "expected a finite number");
}

// Overlays `val` onto `def`, which carries the defaults and the types.
void merge(json& def, const json& val, const std::string& path) {
  if (def.is_object()) {
    if (!val.is_object()) throw ConfigError(path, std::string("expected object, got ") + type_name(val));
    for (auto it = val.begin(); it != val.end(); ++it) {
      const std::string p = join(path, it.key());
      if (!def.contains(it.key())) throw ConfigError(p, "unknown key");
      merge(def[it.key()], it.value(), p);
    }
    return;
  }
  if (def.is_array()) {
    if (!val.is_array()) throw ConfigError(path, std::string("expected array, got ") + type_name(val));
    const json proto = def.empty() ? json(0.0) : def.front();
    for (size_t i = 0; i < val.size(); ++i) check_scalar(proto, val[i], path + "[" + std::to_string(i) + "]");
    def = val;
    return;
  }
  check_scalar(def, val, path);
  def = val;
}

template <class F>
auto keyed(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

void positive(double x, const std::string& key) { require(x > 0.0, key, "must be positive"); }

void power_of_two(long n, const std::string& key) {
  require(n >= 16 && is_power_of_two(n), key, "must be a power of two >= 16");
}

template <class T>
void positive_ladder(const std::vector<T>& v, const std::string& key) {
  require(!v.empty(), key, "must not be empty");
  for (const T& x : v) require(x > 0, key, "entries must be positive");
}

lab::ReferenceConfig read_reference(const json& j, const std::string& key) {
  lab::ReferenceConfig r;
  r.markers = j["markers"];
  r.dt = j["dt"];
  r.scheme = keyed(key + ".scheme", [&] { return classical::scheme_from_string(j["scheme"]); });
  r.verify = j["verify"];
  require(r.markers >= 16, key + ".markers", "must be at least 16");
  positive(r.dt, key + ".dt");
  return r;
}

}  // namespace

RunConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "configuration must be an object");
  json m = RunConfig{}.to_json();
  merge(m, doc, "");

  RunConfig c;
  c.experiment = keyed("experiment", [&] { return experiment_from_string(m["experiment"]); });
  c.seed = m["seed"].get<std::uint64_t>();
  c.threads = m["threads"];
  require(c.threads >= 0, "threads", "must be >= 0");
  c.output_dir = m["output_dir"];
  require(!c.output_dir.empty(), "output_dir", "must not be empty");

  auto& s = c.setup;
  const json& dom = m["domain"];
  s.dim = dom["dim"];
  require(s.dim >= 1 && s.dim <= 3, "domain.dim", "must be 1, 2 or 3");
  s.box_length = dom["box_length"];
  positive(s.box_length, "domain.box_length");
  s.resolution_safety = dom["resolution_safety"];
  positive(s.resolution_safety, "domain.resolution_safety");

  const json& pot = m["potential"];
  s.potential.kind = keyed("potential.kind", [&] { return potential_kind_from_string(pot["kind"]); });
  s.potential.amplitude = pot["amplitude"];
  s.potential.width = pot["width"];
  positive(s.potential.width, "potential.width");

  const json& init = m["initial_data"];
  s.density.center = init["density"]["center"].get<std::vector<double>>();
  s.density.stddev = init["density"]["stddev"].get<std::vector<double>>();
  // A single entry applies to every axis.
  if (s.density.center.size() == 1) s.density.center.assign(s.dim, s.density.center[0]);
  if (s.density.stddev.size() == 1) s.density.stddev.assign(s.dim, s.density.stddev[0]);
  require((int)s.density.center.size() == s.dim, "initial_data.density.center", "needs 1 or dim entries");
  require((int)s.density.stddev.size() == s.dim, "initial_data.density.stddev", "needs 1 or dim entries");
  for (double x : s.density.stddev) positive(x, "initial_data.density.stddev");
  const json& ph = init["phase"];
  s.phase.drift = ph["drift"].get<std::vector<double>>();
  require(s.phase.drift.empty() || (int)s.phase.drift.size() == s.dim, "initial_data.phase.drift",
          "needs 0 or dim entries");
  s.phase.sine_amplitude = ph["sine_amplitude"];
  s.phase.sine_wavenumber = ph["sine_wavenumber"];
  positive(s.phase.sine_wavenumber, "initial_data.phase.sine_wavenumber");
  s.phase.curvature = ph["curvature"];
  s.chirp = init["chirp"];

  const json& t = m["time"];
  c.time.t_final = t["t_final"];
  c.time.caustic_fraction = t["caustic_fraction"];
  require(c.time.caustic_fraction >= 0.0 && c.time.caustic_fraction < 1.0, "time.caustic_fraction",
          "must lie in [0, 1)");
  c.time.probe_markers = t["probe_markers"];
  require(c.time.probe_markers >= 16, "time.probe_markers", "must be at least 16");
  c.time.probe_dt = t["probe_dt"];
  positive(c.time.probe_dt, "time.probe_dt");
  c.time.probe_t_max = t["probe_t_max"];
  positive(c.time.probe_t_max, "time.probe_t_max");

  const json& n = m["n_rate"];
  c.n_rate.ladder = n["ladder"].get<std::vector<int>>();
  positive_ladder(c.n_rate.ladder, "n_rate.ladder");
  c.n_rate.mode = keyed("n_rate.mode", [&] { return classical::init_mode_from_string(n["mode"]); });
  c.n_rate.scheme = keyed("n_rate.scheme", [&] { return classical::scheme_from_string(n["scheme"]); });
  c.n_rate.dt = n["dt"];
  positive(c.n_rate.dt, "n_rate.dt");
  c.n_rate.seeds = n["seeds"];
  require(c.n_rate.seeds >= 1, "n_rate.seeds", "must be at least 1");
  c.n_rate.reference_markers = n["reference_markers"];
  require(c.n_rate.reference_markers >= 16, "n_rate.reference_markers", "must be at least 16");
  c.n_rate.verify_reference = n["verify_reference"];
  c.n_rate.error_floor = n["error_floor"];
  positive(c.n_rate.error_floor, "n_rate.error_floor");
  c.n_rate.seed = c.seed;
  c.n_rate.time = c.time;

  const json& hr = m["h_rate"];
  c.h_rate.ladder = hr["ladder"].get<std::vector<double>>();
  positive_ladder(c.h_rate.ladder, "h_rate.ladder");
  c.h_rate.dt = hr["dt"];
  positive(c.h_rate.dt, "h_rate.dt");
  c.h_rate.max_points = hr["max_points"];
  power_of_two(c.h_rate.max_points, "h_rate.max_points");
  c.h_rate.reference = read_reference(hr["reference"], "h_rate.reference");
  c.h_rate.error_floor = hr["error_floor"];
  positive(c.h_rate.error_floor, "h_rate.error_floor");
  c.h_rate.time = c.time;

  const json& k = m["coupled_kac"];
  c.coupled_kac.hbar = k["hbar"];
  positive(c.coupled_kac.hbar, "coupled_kac.hbar");
  c.coupled_kac.ladder = k["ladder"].get<std::vector<int>>();
  positive_ladder(c.coupled_kac.ladder, "coupled_kac.ladder");
  c.coupled_kac.mode = keyed("coupled_kac.mode", [&] { return classical::init_mode_from_string(k["mode"]); });
  c.coupled_kac.scheme = keyed("coupled_kac.scheme", [&] { return classical::scheme_from_string(k["scheme"]); });
  c.coupled_kac.classical_dt = k["classical_dt"];
  positive(c.coupled_kac.classical_dt, "coupled_kac.classical_dt");
  c.coupled_kac.quantum_dt = k["quantum_dt"];
  positive(c.coupled_kac.quantum_dt, "coupled_kac.quantum_dt");
  c.coupled_kac.max_points = k["max_points"];
  power_of_two(c.coupled_kac.max_points, "coupled_kac.max_points");
  c.coupled_kac.reference = read_reference(k["reference"], "coupled_kac.reference");
  c.coupled_kac.stability_tolerance = k["stability_tolerance"];
  positive(c.coupled_kac.stability_tolerance, "coupled_kac.stability_tolerance");
  c.coupled_kac.time = c.time;

  const json& se = m["sensitivity_scaling"];
  c.sensitivity_scaling.ladder = se["ladder"].get<std::vector<int>>();
  positive_ladder(c.sensitivity_scaling.ladder, "sensitivity_scaling.ladder");
  c.sensitivity_scaling.mode =
      keyed("sensitivity_scaling.mode", [&] { return classical::init_mode_from_string(se["mode"]); });
  c.sensitivity_scaling.scheme =
      keyed("sensitivity_scaling.scheme", [&] { return classical::scheme_from_string(se["scheme"]); });
  c.sensitivity_scaling.dt = se["dt"];
  positive(c.sensitivity_scaling.dt, "sensitivity_scaling.dt");
  c.sensitivity_scaling.mass_fractions = se["mass_fractions"].get<std::vector<double>>();
  require(!c.sensitivity_scaling.mass_fractions.empty(), "sensitivity_scaling.mass_fractions", "must not be empty");
  for (double f : c.sensitivity_scaling.mass_fractions)
    require(f >= 0.0 && f < 1.0, "sensitivity_scaling.mass_fractions", "entries must lie in [0, 1)");
  c.sensitivity_scaling.pullback_fraction = se["pullback_fraction"];
  require(c.sensitivity_scaling.pullback_fraction >= 0.0 && c.sensitivity_scaling.pullback_fraction <= 1.0,
          "sensitivity_scaling.pullback_fraction", "must lie in [0, 1]");
  c.sensitivity_scaling.seed = c.seed;
  c.sensitivity_scaling.time = c.time;

  const json& mx = m["mixed_state"];
  c.mixed_state.ladder = mx["ladder"].get<std::vector<double>>();
  positive_ladder(c.mixed_state.ladder, "mixed_state.ladder");
  c.mixed_state.momentum_center = mx["momentum_center"];
  c.mixed_state.momentum_stddev = mx["momentum_stddev"];
  positive(c.mixed_state.momentum_stddev, "mixed_state.momentum_stddev");
  c.mixed_state.nodes = mx["nodes"];
  require(c.mixed_state.nodes >= 3, "mixed_state.nodes", "must be at least 3");
  c.mixed_state.support_sigmas = mx["support_sigmas"];
  positive(c.mixed_state.support_sigmas, "mixed_state.support_sigmas");
  c.mixed_state.max_points = mx["max_points"];
  power_of_two(c.mixed_state.max_points, "mixed_state.max_points");
  c.mixed_state.error_floor = mx["error_floor"];
  positive(c.mixed_state.error_floor, "mixed_state.error_floor");

  const json& dc = m["decomposition"];
  c.decomposition.h = dc["h"];
  positive(c.decomposition.h, "decomposition.h");
  c.decomposition.hartree_dt = dc["hartree_dt"];
  positive(c.decomposition.hartree_dt, "decomposition.hartree_dt");
  c.decomposition.cfl_fraction = dc["cfl_fraction"];
  require(c.decomposition.cfl_fraction > 0.0 && c.decomposition.cfl_fraction <= 1.0, "decomposition.cfl_fraction",
          "must lie in (0, 1]");
  c.decomposition.points = dc["points"];
  if (c.decomposition.points != 0) power_of_two(c.decomposition.points, "decomposition.points");
  c.decomposition.max_levels = dc["max_levels"];
  require(c.decomposition.max_levels >= 1, "decomposition.max_levels", "must be at least 1");
  c.decomposition.tolerance = dc["tolerance"];
  positive(c.decomposition.tolerance, "decomposition.tolerance");
  c.decomposition.time = c.time;

  const json& eq = m["equivalence"];
  c.equivalence.markers = eq["markers"];
  require(c.equivalence.markers >= 16, "equivalence.markers", "must be at least 16");
  c.equivalence.dt = eq["dt"];
  positive(c.equivalence.dt, "equivalence.dt");
  c.equivalence.field_points = eq["field_points"];
  require(c.equivalence.field_points >= 16, "equivalence.field_points", "must be at least 16");
  c.equivalence.field_margin = eq["field_margin"];
  positive(c.equivalence.field_margin, "equivalence.field_margin");
  c.equivalence.caustic_markers = eq["caustic_markers"];
  require(c.equivalence.caustic_markers >= 16, "equivalence.caustic_markers", "must be at least 16");
  c.equivalence.caustic_dt = eq["caustic_dt"];
  positive(c.equivalence.caustic_dt, "equivalence.caustic_dt");
  c.equivalence.time = c.time;

  const json& sg = m["single"];
  c.single.dt = sg["dt"];
  positive(c.single.dt, "single.dt");
  c.single.h = sg["h"];
  positive(c.single.h, "single.h");
  c.single.markers = sg["markers"];
  require(c.single.markers >= 16, "single.markers", "must be at least 16");
  c.single.snapshot_points = sg["snapshot_points"];
  require(c.single.snapshot_points >= 2, "single.snapshot_points", "must be at least 2");
  c.single.wigner_stride = sg["wigner_stride"];
  require(c.single.wigner_stride >= 1, "single.wigner_stride", "must be at least 1");
  c.single.wigner_v_limit = sg["wigner_v_limit"];
  require(c.single.wigner_v_limit >= 0.0, "single.wigner_v_limit", "must be >= 0");
  return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "malformed config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

}  // namespace mfl::io
