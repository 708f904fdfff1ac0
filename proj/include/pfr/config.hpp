#pragma once

// Run configuration: physical or dimensionless model inputs, circuit
// parameters and per-subcommand settings. Read from JSON files or from the
// built-in presets; every field is optional until a subcommand needs it.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pfr/circuit.hpp"
#include "pfr/model.hpp"

namespace pfr {

struct RunConfig {
  std::string source;  // preset name or file path

  // Physical inputs (ordinary frequencies in MHz, temperatures in mK).
  std::optional<double> support_temperature_mk;
  std::optional<double> waste_temperature_mk;
  std::optional<double> mode_spacing_mhz;
  std::optional<double> omega_w_over_delta;
  std::optional<double> quality_factor;
  std::optional<double> coupling_g_mhz;
  std::optional<double> waste_decay_mhz;
  std::optional<int> k_max;
  std::optional<double> big_g;

  // Dimensionless alternative to the temperature and mode spacing.
  std::optional<double> x;
  std::optional<double> theta;

  // Circuit.
  std::optional<double> waveguide_impedance_ohm;
  std::optional<double> waste_impedance_ohm;
  std::optional<double> josephson_energy_ghz;
  std::optional<double> drive_amplitude;
  std::optional<int> snail_count;
  std::optional<double> capacitance_ratio;
  std::optional<double> target_n1;
  std::optional<double> photon_number;

  // Solver.
  bool extended_precision = false;
  double observable_tol = 1e-6;

  // Sweeps and spectral ranges.
  std::optional<std::string> sweep_axis;
  std::vector<double> sweep_grid;
  bool ideal_g0 = false;
  std::vector<int> teff_k;

  // Monte Carlo.
  int mc_trajectories = 4;
  std::optional<double> mc_burn_in;
  double mc_interval = 1.0;
  long long mc_samples = 10000;
  int mc_batches = 10;
  unsigned long long seed = 0;

  std::vector<std::string> assumed;

  static RunConfig from_json(const nlohmann::json& j, const std::string& source);
  nlohmann::json to_json() const;

  /// Overwrites the fields present in j.
  void merge(const nlohmann::json& j);

  bool dimensionless() const { return x.has_value(); }

  /// Model spec; k_max falls back to default_cutoff(x) when unset.
  ModelSpec model_spec() const;
  PhysicalInputs physical_inputs() const;
  CircuitParams circuit_params() const;
};

/// Names of the built-in presets.
std::vector<std::string> preset_names();

/// Throws ConfigError for an unknown name.
RunConfig load_preset(const std::string& name);

/// Throws ConfigError when the file cannot be read or parsed.
RunConfig load_config_file(const std::string& path);

}  // namespace pfr
