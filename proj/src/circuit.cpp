#include "pfr/circuit.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pfr/constants.hpp"
#include "pfr/errors.hpp"
#include "pfr/meanfield.hpp"

namespace pfr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FeasibilityCheck make_check(std::string name, std::string inequality, double lhs, double rhs,
                            bool mandatory = true) {
  FeasibilityCheck c;
  c.name = std::move(name);
  c.inequality = std::move(inequality);
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = lhs == 0.0 ? kInf : rhs / lhs;
  c.passed = std::isfinite(lhs) && lhs < rhs;
  c.mandatory = mandatory;
  return c;
}

}  // namespace

void CircuitParams::validate() const {
  physical.validate();
  if (!physical.quality_factor || !physical.waste_decay) {
    throw DomainError("CircuitParams: quality factor and waste decay rate are required");
  }
  if (!(waveguide_impedance > 0.0) || !(waste_impedance > 0.0)) {
    throw DomainError("CircuitParams: impedances must be > 0");
  }
  if (!(josephson_frequency > 0.0)) throw DomainError("CircuitParams: E_J must be > 0");
  if (!(drive_amplitude >= 0.0) || !(drive_amplitude < 1.0)) {
    throw DomainError("CircuitParams: drive amplitude must lie in [0, 1)");
  }
  if (snail_count < 1) throw DomainError("CircuitParams: snail count must be >= 1");
  if (capacitance_ratio && !(*capacitance_ratio >= 0.0)) {
    throw DomainError("CircuitParams: capacitance ratio must be >= 0");
  }
}

double CircuitParams::josephson_angular() const { return 2.0 * si::pi * josephson_frequency; }

PhaseZpf phase_zpf(const CircuitParams& params) {
  const double e2_over_hbar = si::elementary_charge * si::elementary_charge / si::hbar;
  PhaseZpf p;
  p.waveguide = std::sqrt(4.0 / si::pi * params.waveguide_impedance * e2_over_hbar);
  p.waste = std::sqrt(2.0 * params.waste_impedance * e2_over_hbar);
  return p;
}

double phase_zpf_mode(const CircuitParams& params, int k) {
  if (k < 1) throw DomainError("phase_zpf_mode: k must be >= 1");
  return phase_zpf(params).waveguide / std::sqrt(static_cast<double>(k));
}

double coupling_strength(const CircuitParams& params) {
  const PhaseZpf p = phase_zpf(params);
  const double nc = params.snail_count;
  return params.drive_amplitude * params.josephson_angular() * p.waste * p.waveguide *
         p.waveguide / (18.0 * nc * nc);
}

double circuit_big_g(const CircuitParams& params) {
  const double g = coupling_strength(params);
  if (g == 0.0) return kInf;
  const double gamma = params.physical.mode_spacing / *params.physical.quality_factor;
  return gamma * *params.physical.waste_decay / (g * g);
}

PhysicalInputs circuit_physical_inputs(const CircuitParams& params) {
  PhysicalInputs p = params.physical;
  p.coupling_g = coupling_strength(params);
  return p;
}

FrequencyShifts frequency_shifts(const CircuitParams& params, double n1, double n_w, int k) {
  if (!(n1 >= 0.0) || !(n_w >= 0.0)) throw DomainError("frequency_shifts: occupations must be >= 0");
  if (k < 1) throw DomainError("frequency_shifts: k must be >= 1");
  const PhaseZpf p = phase_zpf(params);
  const double ej = params.josephson_angular();
  const double nc = params.snail_count;
  const double nc3 = nc * nc * nc;
  const double phi1_sq = p.waveguide * p.waveguide;
  const double phik_sq = phi1_sq / k;
  const double self_kerr_1 = 6.0 * ej * phi1_sq * phi1_sq * n1 / (81.0 * nc3);

  FrequencyShifts s;
  s.k = k;
  s.self_kerr = k == 1 ? self_kerr_1 : 0.0;
  s.cross_kerr_waveguide = k >= 2 ? 4.0 * self_kerr_1 / k : 0.0;
  s.cross_kerr_waste = 24.0 * ej * phik_sq * p.waste * p.waste * n_w / (81.0 * nc3);
  s.lamb = 6.0 * ej * params.drive_amplitude * params.drive_amplitude * phik_sq / (81.0 * nc);
  s.total = s.self_kerr + s.cross_kerr_waveguide + s.cross_kerr_waste + s.lamb;
  return s;
}

std::pair<double, double> resonance_choice(int n) {
  if (n < 0) throw DomainError("resonance_choice: n must be >= 0");
  return {1.25 + 0.5 * n, 0.25 + 0.5 * n};
}

double detuned_kappa(int k, double omega_shift, const CircuitParams& params) {
  if (k < 1) throw DomainError("detuned_kappa: k must be >= 1");
  const double gamma_w = params.physical.waste_decay.value_or(0.0);
  if (!(gamma_w > 0.0)) throw DomainError("detuned_kappa: waste decay rate must be > 0");
  const double g = coupling_strength(params);
  return g * g / (static_cast<double>(k) * (k + 1)) * gamma_w /
         (gamma_w * gamma_w + omega_shift * omega_shift);
}

bool FeasibilityReport::mandatory_passed() const {
  for (const auto& c : checks) {
    if (c.mandatory && !c.skipped && !c.passed) return false;
  }
  return true;
}

FeasibilityReport validate(const CircuitParams& params, std::optional<double> target_n1,
                           std::optional<double> photon_number,
                           const FeasibilityThresholds& thresholds) {
  params.validate();
  const PhysicalInputs& phys = params.physical;
  FeasibilityReport rep;
  rep.phases = phase_zpf(params);
  rep.coupling_g = coupling_strength(params);
  rep.big_g = circuit_big_g(params);
  rep.waste_occupation = bose_einstein(si::hbar * phys.waste_frequency /
                                       (si::boltzmann * phys.waste_temperature));

  if (!target_n1 || !photon_number) {
    PhysicalInputs p = circuit_physical_inputs(params);
    p.big_g_override.reset();
    OccupationVector n;
    if (std::isfinite(rep.big_g) && rep.big_g > 0.0) {
      ModelSpec spec = dimensionless_from_physical(p);
      n = adapt_cutoff_solve(spec).report.occupations;
    } else {
      p.big_g_override = 1.0;  // thermal occupations do not depend on G
      n = thermal_occupations(dimensionless_from_physical(p));
    }
    if (!target_n1) target_n1 = n[0];
    if (!photon_number) photon_number = total_number(n);
  }
  rep.target_n1 = *target_n1;
  rep.photon_number = *photon_number;
  rep.shifts = frequency_shifts(params, rep.target_n1, rep.waste_occupation, 1);
  rep.omega_1 =
      frequency_shifts(params, rep.target_n1, rep.waste_occupation, 2).total - rep.shifts.total;

  const double nc = params.snail_count;
  const double gamma_w = *phys.waste_decay;
  rep.checks.push_back(make_check("waste_phase", "phi_w sqrt(n_w) / N_c < 1",
                                  rep.phases.waste * std::sqrt(rep.waste_occupation) / nc, 1.0));
  rep.checks.push_back(make_check("waveguide_phase", "phi_1 sqrt(N_ph) / N_c < 1",
                                  rep.phases.waveguide * std::sqrt(rep.photon_number) / nc,
                                  1.0));
  rep.checks.push_back(
      make_check("fundamental_shift", "|delta_1| < Gamma", std::abs(rep.shifts.total), gamma_w));
  rep.checks.push_back(
      make_check("mode_resolution", "Gamma < Delta / 4", gamma_w, phys.mode_spacing / 4.0));
  rep.checks.push_back(make_check("weak_coupling", "g / Gamma < threshold",
                                  rep.coupling_g / gamma_w, thresholds.coupling_ratio));
  {
    FeasibilityCheck c = make_check("dissipation_ratio", "G < threshold", rep.big_g,
                                    thresholds.big_g);
    if (!std::isfinite(rep.big_g)) c.note = "g = 0: no engineered cooling, G is infinite";
    rep.checks.push_back(std::move(c));
  }
  if (params.capacitance_ratio) {
    rep.checks.push_back(make_check("capacitive_loss", "C_c / (l C) < threshold",
                                    *params.capacitance_ratio, thresholds.capacitance_ratio,
                                    false));
  } else {
    FeasibilityCheck c;
    c.name = "capacitive_loss";
    c.inequality = "C_c / (l C) < threshold";
    c.mandatory = false;
    c.skipped = true;
    c.note = "no capacitance inputs given";
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

}  // namespace pfr
