#include "pfr/teff.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pfr/errors.hpp"

namespace pfr {

namespace {

double average(const std::vector<TeffValue>& values, int K) {
  if (K < 1 || K > static_cast<int>(values.size())) {
    throw DomainError("teff_range: K must lie in 1.." + std::to_string(values.size()));
  }
  double sum = 0.0;
  for (int k = 1; k <= K; ++k) {
    const TeffValue& v = values[k - 1];
    if (v.flag != TeffFlag::None) {
      throw FlaggedConstituent(std::string("teff_range: transition k = ") + std::to_string(k) +
                                   (v.flag == TeffFlag::Infinite ? " has infinite"
                                                                 : " has negative") +
                                   " effective temperature",
                               k);
    }
    sum += v.teff_over_t;
  }
  return sum / K;
}

}  // namespace

TeffValue teff_at_frequency(const OccupationVector& n, double x, int k) {
  const int K = static_cast<int>(n.size());
  if (k < 1 || k > K - 1) {
    throw DomainError("teff_at_frequency: transition index " + std::to_string(k) +
                      " outside 1.." + std::to_string(K - 1));
  }
  if (!(x > 0.0)) throw DomainError("teff_at_frequency: x must be > 0");

  // A - B = sum_q (n_q - n_{q+k}) exactly, which avoids forming A/B - 1.
  long double emission = 0.0L;  // B
  long double excess = 0.0L;    // A - B
  for (int q = 1; q + k <= K; ++q) {
    const double lower = n[q - 1];
    const double upper = n[q + k - 1];
    emission += static_cast<long double>(lower + 1.0) * upper;
    excess += static_cast<long double>(lower) - upper;
  }
  const long double absorption = emission + excess;
  if (emission == 0.0L && absorption == 0.0L) {
    throw DomainError("teff_at_frequency: no occupied pair of modes for transition " +
                      std::to_string(k));
  }

  TeffValue v;
  v.k = k;
  if (excess == 0.0L) {
    v.teff_over_t = std::numeric_limits<double>::infinity();
    v.flag = TeffFlag::Infinite;
    return v;
  }
  if (emission == 0.0L) {
    v.teff_over_t = 0.0;
    return v;
  }
  const double log_ratio = static_cast<double>(std::log1p(excess / emission));
  v.teff_over_t = x * k / log_ratio;
  if (excess < 0.0L) v.flag = TeffFlag::Inverted;
  return v;
}

double TeffTable::spectral_average(int K) const { return average(per_k, K); }

TeffTable teff_table(const OccupationVector& n, double x) {
  TeffTable t;
  t.x = x;
  const int K = static_cast<int>(n.size());
  t.per_k.reserve(K > 1 ? K - 1 : 0);
  for (int k = 1; k < K; ++k) t.per_k.push_back(teff_at_frequency(n, x, k));
  return t;
}

double teff_range(const OccupationVector& n, double x, int K) {
  if (K < 1 || K > static_cast<int>(n.size()) - 1) {
    throw DomainError("teff_range: K must lie in 1..k_max-1");
  }
  std::vector<TeffValue> values;
  values.reserve(K);
  for (int k = 1; k <= K; ++k) values.push_back(teff_at_frequency(n, x, k));
  return average(values, K);
}

}  // namespace pfr
