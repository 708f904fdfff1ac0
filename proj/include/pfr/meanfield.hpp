#pragma once

// Mean-field kinetic equations for the mode occupations,
//
//   dn_k/dtau = J_{k,k+1} - J_{k-1,k} - gamma_k (n_k - n_k^th),
//   J_{k,k+1} = kappa_k [ n_w (n_{k+1} - n_k) + (n_k + 1) n_{k+1} ],
//
// with closed chain ends, and a damped Newton solver for the stationary state.

#include <optional>
#include <vector>

#include "pfr/model.hpp"
#include "pfr/tridiagonal.hpp"

namespace pfr {

/// J_{k,k+1}, photon current from mode k+1 into mode k. Requires
/// 1 <= k <= k_max-1, throws std::out_of_range otherwise.
double current(int k, const OccupationVector& n, const RateSchedule& sched);

/// All currents J_{k,k+1}, k = 1..k_max-1.
std::vector<double> currents(const OccupationVector& n, const RateSchedule& sched);

OccupationVector rhs(const OccupationVector& n, const RateSchedule& sched);

/// Analytic d(rhs)/dn.
Tridiagonal jacobian(const OccupationVector& n, const RateSchedule& sched);

/// Per-mode residual scale max(n_k, 1) * rho_k, where rho_k is the total
/// rate at which mode k exchanges photons with its neighbours and its bath.
std::vector<double> residual_scale(const OccupationVector& n, const RateSchedule& sched);

/// max_k |rhs_k| / residual_scale_k.
double scaled_residual(const OccupationVector& n, const RateSchedule& sched);

struct SolverOptions {
  double residual_tol = 1e-12;
  int max_newton_iters = 200;
  double damping_min = 1e-4;
  double pseudo_time_step = 0.1;
  int max_pseudo_steps = 5000;
  Precision precision = Precision::Double;
};

struct SteadyStateReport {
  OccupationVector occupations;
  double total_number = 0.0;
  double total_energy = 0.0;
  double thermal_energy = 0.0;
  double condensate_fraction = 0.0;
  std::vector<double> currents;
  bool converged = false;
  int iterations = 0;
  int newton_iterations = 0;
  int pseudo_steps = 0;
  double residual = 0.0;
  int k_max = 0;
};

/// Stationary occupations for G > 0. Throws DegenerateSteadyState for G = 0
/// and NotConverged when the iteration budget is exhausted.
SteadyStateReport steady_state(const ModelSpec& spec, const SolverOptions& opts = {},
                               const std::optional<OccupationVector>& init = std::nullopt);

/// Truncates or extends a warm-start vector to spec.k_max, filling new modes
/// with thermal occupations.
OccupationVector resize_warm_start(const OccupationVector& n, const ModelSpec& spec);

struct CutoffResult {
  ModelSpec spec;
  SteadyStateReport report;
  int doublings = 0;
};

/// Doubles k_max from default_cutoff(spec.x) until N_ph, E_ph and n_1 move
/// by less than observable_tol (relative) between successive solves.
/// Throws CutoffNotConverged past kMaxCutoff.
CutoffResult adapt_cutoff_solve(const ModelSpec& spec, const SolverOptions& opts = {},
                                double observable_tol = 1e-6,
                                const std::optional<OccupationVector>& init = std::nullopt);

ModelSpec adapt_cutoff(const ModelSpec& spec, const SolverOptions& opts = {},
                       double observable_tol = 1e-6);

/// Zig-zag diagnostic for directional-flow regimes. Reports the normalized
/// alternating second difference and the number of sign flips of
/// n_{k+1} - n_k.
struct StaggeringDiagnostic {
  double alternating_norm = 0.0;
  int sign_changes = 0;
};

StaggeringDiagnostic staggering(const OccupationVector& n);

}  // namespace pfr
