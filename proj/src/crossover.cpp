#include "pfr/crossover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pfr/errors.hpp"

namespace pfr {

namespace {

constexpr double kInvE = 0.36787944117144233;

void check_crossover_spec(const ModelSpec& spec) {
  spec.validate();
  if (!(spec.big_g > 0.0)) throw DomainError("crossover estimate requires G > 0");
  if (!(spec.r > 1.0)) throw DomainError("crossover estimate requires omega_w > Delta (r > 1)");
}

double waste_exponent(const ModelSpec& spec) { return spec.x * spec.r / spec.theta; }

double halley(double w, double z) {
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double dw = f / denom;
    w -= dw;
    if (!std::isfinite(w) || std::abs(dw) <= 4e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

double refine_vertex(const OccupationVector& n, int k) {
  const int K = static_cast<int>(n.size());
  if (k <= 1 || k >= K) return k;
  const double em = (k - 1) * n[k - 2];
  const double e0 = k * n[k - 1];
  const double ep = (k + 1) * n[k];
  const double curvature = em - 2.0 * e0 + ep;
  if (curvature == 0.0) return k;
  const double shift = 0.5 * (em - ep) / curvature;
  return k + std::clamp(shift, -0.5, 0.5);
}

int first_dip(const OccupationVector& n) {
  const int K = static_cast<int>(n.size());
  for (int k = 2; k < K; ++k) {
    const double e = k * n[k - 1];
    if (e <= (k - 1) * n[k - 2] && e < (k + 1) * n[k]) return k;
  }
  return -1;
}

}  // namespace

double lambert_w0(double z) {
  if (std::isnan(z) || z < -kInvE) throw DomainError("lambert_w0: argument below -1/e");
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return z;
  if (z - (-kInvE) < 1e-15) return -1.0;

  double w;
  if (z < -0.25) {
    const double p = std::sqrt(2.0 * (std::numbers::e * z + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (z > std::numbers::e) {
    const double l1 = std::log(z);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  } else {
    const double l = std::log1p(z);
    w = l * (1.0 - std::log1p(l) / (2.0 + l));
  }
  return halley(w, z);
}

double lambert_w0_of_exp(double log_z) {
  if (log_z < 700.0) return lambert_w0(std::exp(log_z));
  // w + ln w = log_z, Newton from the asymptotic guess.
  double w = log_z - std::log(log_z);
  for (int it = 0; it < 64; ++it) {
    const double f = w + std::log(w) - log_z;
    const double dw = f / (1.0 + 1.0 / w);
    w -= dw;
    if (std::abs(dw) <= 4e-16 * w) break;
  }
  return w;
}

std::optional<double> kc_implicit(const ModelSpec& spec) {
  check_crossover_spec(spec);
  const double xw = waste_exponent(spec);
  const double b = xw - spec.x;
  if (!(b > 0.0)) return std::nullopt;
  const double rhs = std::log(spec.r / (spec.r - 1.0)) + xw;
  auto f = [&](double k) { return std::log(spec.big_g) + 4.0 * std::log(k) + b * k - rhs; };
  double lo = 1.0;
  double hi = static_cast<double>(spec.k_max);
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (!(flo < 0.0 && fhi >= 0.0)) return std::nullopt;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double kc_closed(const ModelSpec& spec) {
  check_crossover_spec(spec);
  const double xw = waste_exponent(spec);
  const double b = xw - spec.x;
  if (!(b > 0.0)) throw DomainError("kc_closed: requires x r/theta > x (T_low < T)");
  const double log_a = xw - std::log1p(-1.0 / spec.r) - std::log(spec.big_g);
  const double log_arg = std::log(b / 4.0) + 0.25 * log_a;
  return 4.0 * lambert_w0_of_exp(log_arg) / b;
}

std::optional<double> energy_dip(const OccupationVector& n) {
  const int k = first_dip(n);
  if (k < 0) return std::nullopt;
  return refine_vertex(n, k);
}

std::optional<double> kc_numeric(const OccupationVector& n) {
  const int dip = first_dip(n);
  if (dip < 0) return std::nullopt;
  const int K = static_cast<int>(n.size());
  int best = dip;
  double best_e = dip * n[dip - 1];
  for (int k = dip + 1; k <= K; ++k) {
    const double e = k * n[k - 1];
    if (e > best_e) {
      best_e = e;
      best = k;
    }
  }
  if (best == dip || best == K) return std::nullopt;
  return refine_vertex(n, best);
}

CrossoverResult crossover(const ModelSpec& spec, const SolverOptions& opts) {
  check_crossover_spec(spec);
  CrossoverResult res;
  const CutoffResult solved = adapt_cutoff_solve(spec, opts);
  res.spec = solved.spec;
  res.kc_implicit = kc_implicit(res.spec);
  res.kc_closed = kc_closed(res.spec);
  res.kc_numeric = kc_numeric(solved.report.occupations);
  res.energy_dip = energy_dip(solved.report.occupations);
  return res;
}

}  // namespace pfr
