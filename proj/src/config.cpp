#include "pfr/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pfr/constants.hpp"
#include "pfr/errors.hpp"

namespace pfr {

namespace {

using nlohmann::json;

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table = {
      {"fig2a", R"json({
        "support_temperature_mk": 50, "waste_temperature_mk": 50,
        "mode_spacing_mhz": 60, "omega_w_over_delta": 3, "big_g": 1e-6,
        "sweep": {"axis": "big_g", "grid": [1e-2, 1e-4, 1e-6, 1e-8]},
        "assumed": ["big_g = 1e-6 as the single-run default; the sweep grid covers the G family"]
      })json"},
      {"fig2b", R"json({
        "support_temperature_mk": 50, "waste_temperature_mk": 50,
        "mode_spacing_mhz": 60, "omega_w_over_delta": 3, "big_g": 1e-6,
        "sweep": {"axis": "omega_w_over_delta", "grid": [1.5, 2, 3, 5, 10]},
        "assumed": ["omega_w_over_delta grid values", "omega_w_over_delta = 3 as the single-run default"]
      })json"},
      {"fig3", R"json({
        "support_temperature_mk": 20, "waste_temperature_mk": 20,
        "mode_spacing_mhz": 11, "omega_w_over_delta": 90.9090909090909, "big_g": 1.8e-5,
        "teff_k": [2, 5, 15],
        "sweep": {"axis": "omega_w_over_delta", "grid": [2, 5, 10, 20, 45.4545454545455, 90.9090909090909]},
        "assumed": ["mode_spacing_mhz = 11 and big_g = 1.8e-5 taken from the table1 preset",
                    "omega_w_over_delta = 90.909 (omega_w/2pi = 1 GHz)",
                    "T_w = T", "omega_w_over_delta grid values"]
      })json"},
      {"fig4", R"json({
        "x": 0.006, "theta": 1, "omega_w_over_delta": 1,
        "ideal_g0": true,
        "sweep": {"axis": "t_low_over_t"},
        "assumed": ["x = 0.006 as the longest line; the family {0.1, 0.03, 0.012, 0.006} is an artifact choice",
                    "default grid: 200 log-spaced T_low/T on [0.05, 2]"]
      })json"},
      {"fig5", R"json({
        "support_temperature_mk": 100, "waste_temperature_mk": 100,
        "mode_spacing_mhz": 80, "omega_w_over_delta": 5, "big_g": 1e-4, "k_max": 10,
        "mc": {"trajectories": 2, "interval": 10, "samples": 40000, "batches": 20},
        "assumed": ["T_w = T", "trajectory count, burn-in (default 20/gamma_1), sample interval and batching"]
      })json"},
      {"fig6", R"json({
        "support_temperature_mk": 20, "waste_temperature_mk": 20,
        "mode_spacing_mhz": 11, "omega_w_over_delta": 90.9090909090909, "big_g": 1.8e-5,
        "teff_k": [1, 2, 3, 4, 5, 6, 7, 8, 9],
        "assumed": ["all waveguide parameters; only qualitative agreement is expected",
                    "mode_spacing_mhz = 11, big_g = 1.8e-5, omega_w/2pi = 1 GHz"]
      })json"},
      {"table1", R"json({
        "support_temperature_mk": 20, "waste_temperature_mk": 20,
        "mode_spacing_mhz": 11, "quality_factor": 5e6,
        "omega_w_over_delta": 90.9090909090909, "waste_decay_mhz": 1.8,
        "waste_impedance_ohm": 6000, "waveguide_impedance_ohm": 15,
        "josephson_energy_ghz": 30, "snail_count": 3, "drive_amplitude": 0.4,
        "assumed": ["omega_w/2pi = 1 GHz, the upper end of the stated 200 MHz - 1 GHz range", "T_w = T"]
      })json"},
  };
  return table;
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (v.is_null()) {
    out.reset();
    return;
  }
  try {
    out = v.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <class T>
void write(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "support_temperature_mk", "waste_temperature_mk", "mode_spacing_mhz",
      "omega_w_over_delta", "quality_factor", "coupling_g_mhz", "waste_decay_mhz", "k_max",
      "big_g", "x", "theta", "waveguide_impedance_ohm", "waste_impedance_ohm",
      "josephson_energy_ghz", "drive_amplitude", "snail_count", "capacitance_ratio",
      "target_n1", "photon_number", "extended_precision", "observable_tol", "sweep",
      "ideal_g0", "teff_k", "mc", "seed", "assumed", "source"};
  return keys;
}

double require(const std::optional<double>& v, const char* key) {
  if (!v) throw ConfigError(std::string("missing config key '") + key + "'");
  return *v;
}

}  // namespace

void RunConfig::merge(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& item : j.items()) {
    if (!known_keys().count(item.key())) {
      throw ConfigError("unknown config key '" + item.key() + "'");
    }
  }
  read(j, "support_temperature_mk", support_temperature_mk);
  read(j, "waste_temperature_mk", waste_temperature_mk);
  read(j, "mode_spacing_mhz", mode_spacing_mhz);
  read(j, "omega_w_over_delta", omega_w_over_delta);
  read(j, "quality_factor", quality_factor);
  read(j, "coupling_g_mhz", coupling_g_mhz);
  read(j, "waste_decay_mhz", waste_decay_mhz);
  read(j, "k_max", k_max);
  read(j, "big_g", big_g);
  read(j, "x", x);
  read(j, "theta", theta);
  read(j, "waveguide_impedance_ohm", waveguide_impedance_ohm);
  read(j, "waste_impedance_ohm", waste_impedance_ohm);
  read(j, "josephson_energy_ghz", josephson_energy_ghz);
  read(j, "drive_amplitude", drive_amplitude);
  read(j, "snail_count", snail_count);
  read(j, "capacitance_ratio", capacitance_ratio);
  read(j, "target_n1", target_n1);
  read(j, "photon_number", photon_number);
  read(j, "extended_precision", extended_precision);
  read(j, "observable_tol", observable_tol);
  read(j, "ideal_g0", ideal_g0);
  read(j, "teff_k", teff_k);
  read(j, "seed", seed);
  read(j, "assumed", assumed);
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    if (!s.is_object()) throw ConfigError("config key 'sweep' must be an object");
    read(s, "axis", sweep_axis);
    read(s, "grid", sweep_grid);
  }
  if (j.contains("mc")) {
    const json& m = j.at("mc");
    if (!m.is_object()) throw ConfigError("config key 'mc' must be an object");
    read(m, "trajectories", mc_trajectories);
    read(m, "burn_in", mc_burn_in);
    read(m, "interval", mc_interval);
    read(m, "samples", mc_samples);
    read(m, "batches", mc_batches);
  }
}

RunConfig RunConfig::from_json(const json& j, const std::string& src) {
  RunConfig c;
  c.merge(j);
  c.source = src;
  return c;
}

json RunConfig::to_json() const {
  json j = json::object();
  j["source"] = source;
  write(j, "support_temperature_mk", support_temperature_mk);
  write(j, "waste_temperature_mk", waste_temperature_mk);
  write(j, "mode_spacing_mhz", mode_spacing_mhz);
  write(j, "omega_w_over_delta", omega_w_over_delta);
  write(j, "quality_factor", quality_factor);
  write(j, "coupling_g_mhz", coupling_g_mhz);
  write(j, "waste_decay_mhz", waste_decay_mhz);
  write(j, "k_max", k_max);
  write(j, "big_g", big_g);
  write(j, "x", x);
  write(j, "theta", theta);
  write(j, "waveguide_impedance_ohm", waveguide_impedance_ohm);
  write(j, "waste_impedance_ohm", waste_impedance_ohm);
  write(j, "josephson_energy_ghz", josephson_energy_ghz);
  write(j, "drive_amplitude", drive_amplitude);
  write(j, "snail_count", snail_count);
  write(j, "capacitance_ratio", capacitance_ratio);
  write(j, "target_n1", target_n1);
  write(j, "photon_number", photon_number);
  j["extended_precision"] = extended_precision;
  j["observable_tol"] = observable_tol;
  json sweep = json::object();
  write(sweep, "axis", sweep_axis);
  sweep["grid"] = sweep_grid;
  j["sweep"] = sweep;
  j["ideal_g0"] = ideal_g0;
  j["teff_k"] = teff_k;
  json mc = json::object();
  mc["trajectories"] = mc_trajectories;
  mc["burn_in"] = mc_burn_in ? json(*mc_burn_in) : json(nullptr);
  mc["interval"] = mc_interval;
  mc["samples"] = mc_samples;
  mc["batches"] = mc_batches;
  j["mc"] = mc;
  j["seed"] = seed;
  j["assumed"] = assumed;
  return j;
}

ModelSpec RunConfig::model_spec() const {
  if (x) {
    if (support_temperature_mk || mode_spacing_mhz) {
      throw ConfigError("give either x or support_temperature_mk/mode_spacing_mhz, not both");
    }
    ModelSpec s;
    s.x = *x;
    s.theta = theta.value_or(1.0);
    s.r = require(omega_w_over_delta, "omega_w_over_delta");
    s.big_g = big_g.value_or(0.0);
    s.k_max = k_max ? *k_max : default_cutoff(s.x);
    s.validate();
    return s;
  }
  PhysicalInputs p = physical_inputs();
  if (!p.big_g_override && !p.derived_big_g()) {
    if (waveguide_impedance_ohm && quality_factor && waste_decay_mhz) {
      p.coupling_g = coupling_strength(circuit_params());
    } else {
      throw ConfigError("G is undetermined: set big_g, or quality_factor, coupling_g_mhz and "
                        "waste_decay_mhz, or the circuit parameters");
    }
  }
  return dimensionless_from_physical(p);
}

PhysicalInputs RunConfig::physical_inputs() const {
  if (x) throw ConfigError("physical inputs are unavailable for a dimensionless config");
  PhysicalInputs p;
  p.support_temperature = require(support_temperature_mk, "support_temperature_mk") * si::millikelvin;
  p.waste_temperature =
      (waste_temperature_mk ? *waste_temperature_mk : *support_temperature_mk) * si::millikelvin;
  p.mode_spacing = require(mode_spacing_mhz, "mode_spacing_mhz") * si::mhz_to_angular;
  p.waste_frequency = require(omega_w_over_delta, "omega_w_over_delta") * p.mode_spacing;
  p.quality_factor = quality_factor;
  if (coupling_g_mhz) p.coupling_g = *coupling_g_mhz * si::mhz_to_angular;
  if (waste_decay_mhz) p.waste_decay = *waste_decay_mhz * si::mhz_to_angular;
  p.k_max = k_max;
  p.big_g_override = big_g;
  p.validate();
  return p;
}

CircuitParams RunConfig::circuit_params() const {
  CircuitParams c;
  c.physical = physical_inputs();
  c.waveguide_impedance = require(waveguide_impedance_ohm, "waveguide_impedance_ohm");
  c.waste_impedance = require(waste_impedance_ohm, "waste_impedance_ohm");
  c.josephson_frequency = require(josephson_energy_ghz, "josephson_energy_ghz") * 1e9;
  c.drive_amplitude = require(drive_amplitude, "drive_amplitude");
  c.snail_count = snail_count.value_or(1);
  c.capacitance_ratio = capacitance_ratio;
  c.validate();
  return c;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, body] : presets()) names.push_back(name);
  return names;
}

RunConfig load_preset(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw ConfigError("unknown preset '" + name + "'");
  return RunConfig::from_json(json::parse(it->second), name);
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse config file '" + path + "': " + e.what());
  }
  return RunConfig::from_json(j, path);
}

}  // namespace pfr
