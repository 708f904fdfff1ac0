#pragma once

// Estimates of the crossover mode k_c separating modes that equilibrate at
// T_low from modes that stay near the bath temperature.

#include <optional>

#include "pfr/meanfield.hpp"
#include "pfr/model.hpp"

namespace pfr {

/// Principal branch W0(z), z >= -1/e. Throws DomainError below the branch point.
double lambert_w0(double z);

/// W0(exp(log_z)) for arguments too large to form directly.
double lambert_w0_of_exp(double log_z);

/// Root of G k^4 exp(b k) = (r/(r-1)) exp(x_w) on [1, k_max], where
/// x_w = x r/theta is the waste Boltzmann exponent and b = x_w - x.
/// Requires G > 0 and r > 1; returns nullopt when the bracket holds no root.
std::optional<double> kc_implicit(const ModelSpec& spec);

/// 4 W((b/4) a^{1/4}) / b with a = exp(x_w)/((1 - 1/r) G).
/// Requires G > 0, r > 1 and b > 0.
double kc_closed(const ModelSpec& spec);

/// Location of the first interior local minimum of E_k = k n_k, refined by
/// a parabola through the neighbouring points.
std::optional<double> energy_dip(const OccupationVector& n);

/// Argmax of E_k over k >= energy_dip, with parabolic refinement.
std::optional<double> kc_numeric(const OccupationVector& n);

struct CrossoverResult {
  ModelSpec spec;  // k_max as used by the mean-field solve
  std::optional<double> kc_implicit;
  double kc_closed = 0.0;
  std::optional<double> kc_numeric;
  std::optional<double> energy_dip;
};

/// All estimates for one spec. The numeric values come from an
/// adapt_cutoff mean-field solve.
CrossoverResult crossover(const ModelSpec& spec, const SolverOptions& opts = {});

}  // namespace pfr
