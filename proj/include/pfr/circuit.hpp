#pragma once

// Hardware feasibility of the SNAIL-coupled waveguide: zero-point phases,
// coupling strength, coupler-induced frequency shifts and the validity
// conditions of the cooling master equation. SI units throughout; all
// frequencies are angular.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pfr/model.hpp"

namespace pfr {

struct CircuitParams {
  PhysicalInputs physical;  // T, T_w, Delta, omega_w, Q, Gamma; g is derived here
  double waveguide_impedance = 0.0;  // Z, ohm
  double waste_impedance = 0.0;      // Z_w, ohm
  double josephson_frequency = 0.0;  // E_J/h, Hz
  double drive_amplitude = 0.0;      // epsilon
  int snail_count = 1;               // N_c
  std::optional<double> capacitance_ratio;  // C_c/(l C), informational

  void validate() const;
  /// E_J/hbar, rad/s.
  double josephson_angular() const;
};

struct PhaseZpf {
  double waveguide = 0.0;  // reduced phase of mode 1
  double waste = 0.0;
};

PhaseZpf phase_zpf(const CircuitParams& params);

/// Reduced zero-point phase of waveguide mode k, phi_1/sqrt(k).
double phase_zpf_mode(const CircuitParams& params, int k);

/// g = eps (E_J/hbar) phi_w phi_1^2 / (18 N_c^2).
double coupling_strength(const CircuitParams& params);

/// (Delta/Q) Gamma / g^2 with g from coupling_strength; +inf when g = 0.
double circuit_big_g(const CircuitParams& params);

/// Physical inputs with g filled in from the circuit.
PhysicalInputs circuit_physical_inputs(const CircuitParams& params);

/// Frequency shift of one waveguide mode (rad/s), split by origin.
struct FrequencyShifts {
  int k = 1;
  double self_kerr = 0.0;             // fundamental mode only
  double cross_kerr_waveguide = 0.0;  // from the condensate, modes k >= 2
  double cross_kerr_waste = 0.0;
  double lamb = 0.0;
  double total = 0.0;
};

/// delta_k for condensate occupation n_1 and waste occupation n_w. For k = 1
/// the condensate enters through the self-Kerr term; for k >= 2 through the
/// cross-Kerr term 4 K_1^se / k.
FrequencyShifts frequency_shifts(const CircuitParams& params, double n1, double n_w, int k = 1);

/// (omega_w/Delta, omega_d/Delta) = (5/4 + n/2, 1/4 + n/2).
std::pair<double, double> resonance_choice(int n);

/// kappa_k = g^2/(k(k+1)) Gamma/(Gamma^2 + Omega_k^2), rad/s.
double detuned_kappa(int k, double omega_shift, const CircuitParams& params);

struct FeasibilityCheck {
  std::string name;
  std::string inequality;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs/lhs; above 1 means the inequality holds
  bool passed = false;
  bool mandatory = true;
  bool skipped = false;
  std::string note;
};

struct FeasibilityReport {
  PhaseZpf phases;
  double coupling_g = 0.0;
  double big_g = 0.0;
  double waste_occupation = 0.0;
  double photon_number = 0.0;
  double target_n1 = 0.0;
  FrequencyShifts shifts;   // delta_1
  double omega_1 = 0.0;     // delta_2 - delta_1
  std::vector<FeasibilityCheck> checks;

  bool mandatory_passed() const;
};

/// Thresholds for the "much smaller than" conditions.
struct FeasibilityThresholds {
  double coupling_ratio = 0.5;  // g/Gamma
  double big_g = 1e-2;
  double capacitance_ratio = 1e-5;
};

/// Evaluates all validity conditions. photon_number and target_n1 default to
/// N_ph and n_1 of the mean-field steady state at the circuit's G.
FeasibilityReport validate(const CircuitParams& params,
                           std::optional<double> target_n1 = std::nullopt,
                           std::optional<double> photon_number = std::nullopt,
                           const FeasibilityThresholds& thresholds = {});

}  // namespace pfr
