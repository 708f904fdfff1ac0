#pragma once

// Dimensionless model of a 1D photon gas coupled to an Ohmic bath and to an
// engineered, number-conserving cooling channel.
//
// Internal units: energies in hbar*Delta, temperatures through
// x = hbar*Delta / (k_B T), rates in g^2/Gamma, time in Gamma/g^2.
// Mode k has frequency k*Delta; containers are 0-based, index k-1 is mode k.

#include <optional>
#include <vector>

namespace pfr {

enum class Precision { Double, Extended };

/// Mean occupations n_k, index k-1 holds mode k.
using OccupationVector = std::vector<double>;

inline constexpr int kMaxCutoff = 20000;

/// 1 / (exp(x_arg) - 1). Throws DomainError for x_arg <= 0.
double bose_einstein(double x_arg);

struct ModelSpec {
  double x = 0.0;      // hbar Delta / (k_B T)
  double theta = 1.0;  // T_w / T
  double r = 1.0;      // omega_w / Delta
  double big_g = 0.0;  // gamma Gamma / g^2
  int k_max = 2;

  /// hbar Delta / (k_B T_low) with T_low = T_w Delta / omega_w.
  double x_low() const { return x * r / theta; }
  double t_low_over_t() const { return theta / r; }

  /// Throws DomainError when an invariant is violated.
  void validate() const;
};

/// Smallest k with x*k > 40, clamped to [2, kMaxCutoff].
int default_cutoff(double x);

/// SI hardware inputs. Frequencies are angular (rad/s).
struct PhysicalInputs {
  double support_temperature = 0.0;  // K
  double waste_temperature = 0.0;    // K
  double mode_spacing = 0.0;         // Delta
  double waste_frequency = 0.0;      // omega_w
  std::optional<double> quality_factor;
  std::optional<double> coupling_g;   // g
  std::optional<double> waste_decay;  // Gamma
  std::optional<int> k_max;
  std::optional<double> big_g_override;

  void validate() const;
  /// gamma Gamma / g^2 from (Q, g, Gamma); nullopt when any is missing.
  std::optional<double> derived_big_g() const;
};

ModelSpec dimensionless_from_physical(const PhysicalInputs& inputs);

/// Inverse of dimensionless_from_physical given the anchors that the
/// dimensionless description does not carry.
PhysicalInputs physical_from_dimensionless(const ModelSpec& spec,
                                           double support_temperature,
                                           double coupling_g,
                                           double waste_decay);

/// Classical transition rates in units of g^2/Gamma.
struct RateSchedule {
  std::vector<double> kappa;  // kappa[k-1] = 1/(k(k+1)), k = 1..k_max-1
  std::vector<double> gamma;  // gamma[k-1] = G k, k = 1..k_max
  double n_w = 0.0;
  OccupationVector n_th;

  int k_max() const { return static_cast<int>(gamma.size()); }
};

RateSchedule make_schedule(const ModelSpec& spec);

OccupationVector thermal_occupations(const ModelSpec& spec);
double waste_occupation(const ModelSpec& spec);

/// E_th = sum_k k n_k^th in units of hbar Delta.
double thermal_energy(const ModelSpec& spec,
                      Precision precision = Precision::Double);

/// Plain index-order sums; reports and tests rely on identical ordering.
double total_number(const OccupationVector& n);
double total_energy(const OccupationVector& n);
double total_number(const OccupationVector& n, Precision precision);
double total_energy(const OccupationVector& n, Precision precision);

}  // namespace pfr
