#pragma once

// Closed-form engineered distributions, chemical-potential solvers under
// number and energy constraints, and thermodynamic-limit condensation
// formulas.
//
// The chemical potential mu is in units of hbar*Delta, so the fundamental
// mode sits at energy 1 and every distribution requires mu < 1. The solvers
// work in s = ln(1 - mu), which stays well conditioned as mu -> 1.

#include <vector>

#include "pfr/model.hpp"

namespace pfr {

struct EngineeredDistribution {
  double t_low_over_t = 1.0;
  double mu = 0.0;
  double log_one_minus_mu = 0.0;  // s = ln(1 - mu), exact even when mu rounds to 1
  OccupationVector occupations;
};

/// n_k = 1/(exp(x_low (k - mu)) - 1). Throws DomainError for mu >= 1.
OccupationVector engineered_distribution(const ModelSpec& spec, double mu);

/// Same distribution parametrized by s = ln(1 - mu).
OccupationVector engineered_distribution_log(const ModelSpec& spec, double log_one_minus_mu);

/// mu < 1 with sum_k n_k(mu) = n_target, to 1e-10 relative.
EngineeredDistribution solve_mu_for_number(const ModelSpec& spec, double n_target);

/// mu < 1 with sum_k k n_k(mu) = E_th(spec), to 1e-10 relative.
EngineeredDistribution solve_mu_for_energy(const ModelSpec& spec);

/// n_1 / sum_k n_k. Throws DomainError when the sum is not positive.
double condensate_fraction(const OccupationVector& n);

// Thermodynamic-limit oracles. t_ratio = T_low/T, inv_x = k_B T/(hbar Delta).

/// (pi^2/6) inv_x^2 (1 - t_ratio^2), for 0 < t_ratio < 1.
double tl_ground_occupation(double t_ratio, double inv_x);

/// mu_eff/(hbar Delta) = 1 - (6/pi^2) inv_x^-2 (t_ratio inv_x)/(1 - t_ratio^2).
double tl_mu_eff(double t_ratio, double inv_x);

/// Leading-order excited population (t_ratio inv_x) ln(t_ratio inv_x).
double tl_excited_number(double t_ratio, double inv_x);

struct HotLimitMu {
  double beta_low_mu = 0.0;  // ln((pi^2/6)/t_ratio^2)
  bool approximate = false;  // set for t_ratio < 3
};

/// Hot-limit chemical potential in units of k_B T_low, for t_ratio > 1.
HotLimitMu tl_mu_hot(double t_ratio);

struct CondensationPoint {
  double t_low_over_t = 0.0;
  double fraction_energy_constrained = 0.0;
  double mu_energy_constrained = 0.0;
  double fraction_fixed_n = 0.0;
  double mu_fixed_n = 0.0;
  double n_ph = 0.0;  // photon number on the energy-constrained branch
};

struct CondensationCurve {
  double x = 0.0;
  int k_max = 0;
  double fixed_number = 0.0;  // N held fixed on the comparison branch
  std::vector<CondensationPoint> points;
};

/// Mode count used for a curve: large enough for the thermal reference and
/// for the hottest grid point.
int condensation_cutoff(const ModelSpec& spec, const std::vector<double>& t_ratio_grid);

/// Energy-constrained (G = 0+) branch and fixed-number comparison branch
/// for every grid point. The grid must be positive and strictly increasing.
/// Points are evaluated on up to `threads` workers.
CondensationCurve condensation_curve(const ModelSpec& spec,
                                     const std::vector<double>& t_ratio_grid, int threads = 1);

/// Fixed-number massive-boson comparison only: N = sum_k n_k^th(spec) held
/// fixed while the temperature is lowered to T_low.
CondensationCurve equilibrium_comparison(const ModelSpec& spec,
                                         const std::vector<double>& t_ratio_grid,
                                         int threads = 1);

/// 200 log-spaced ratios on [0.05, 2].
std::vector<double> default_t_ratio_grid();

}  // namespace pfr
