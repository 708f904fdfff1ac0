#pragma once

// Effective temperature seen by a weak probe at frequency k*Delta,
//
//   T_eff(k)/T = x k / ln( sum_q (n_{q+k}+1) n_q / sum_q (n_q+1) n_{q+k} ),
//
// summed over q = 1..k_max-k, and its average over transitions 1..K.

#include <vector>

#include "pfr/model.hpp"

namespace pfr {

enum class TeffFlag {
  None,
  Infinite,  // absorption and emission balance exactly
  Inverted,  // emission exceeds absorption: negative temperature
};

struct TeffValue {
  int k = 0;
  double teff_over_t = 0.0;  // +inf when Infinite, negative when Inverted
  TeffFlag flag = TeffFlag::None;
};

/// Requires 1 <= k <= k_max-1 and at least one occupied mode in the sums.
TeffValue teff_at_frequency(const OccupationVector& n, double x, int k);

struct TeffTable {
  double x = 0.0;
  std::vector<TeffValue> per_k;  // entry k-1 holds transition k

  /// Mean of per_k over k = 1..K. Throws FlaggedConstituent on any flagged entry.
  double spectral_average(int K) const;
};

TeffTable teff_table(const OccupationVector& n, double x);

/// (1/K) sum_{k=1}^{K} teff_at_frequency(n, x, k).
double teff_range(const OccupationVector& n, double x, int K);

}  // namespace pfr
