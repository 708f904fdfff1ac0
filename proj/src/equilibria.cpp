#include "pfr/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pfr/errors.hpp"
#include "pfr/parallel.hpp"

namespace pfr {

namespace {

constexpr double kMinLog = -690.0;
constexpr double kMaxLog = 700.0;
constexpr double kSolveTol = 1e-13;
constexpr double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;

enum class Moment { Number, Energy };

OccupationVector occupations_at(double x_low, double s, int k_max) {
  const double es = std::exp(s);
  OccupationVector n(k_max);
  for (int k = 1; k <= k_max; ++k) n[k - 1] = bose_einstein(x_low * ((k - 1) + es));
  return n;
}

double moment_at(double x_low, double s, int k_max, Moment m) {
  const double es = std::exp(s);
  long double sum = 0.0L;
  for (int k = 1; k <= k_max; ++k) {
    const double nk = bose_einstein(x_low * ((k - 1) + es));
    sum += m == Moment::Energy ? static_cast<long double>(k) * nk : nk;
  }
  return static_cast<double>(sum);
}

// Bisection for the s = ln(1 - mu) at which the moment equals target. The
// moment decreases strictly in s.
double solve_log_mu(double x_low, int k_max, double target, Moment m) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw DomainError("chemical potential solve: target must be positive and finite");
  }
  auto excess = [&](double s) { return moment_at(x_low, s, k_max, m) - target; };

  double lo, hi;  // excess(lo) > 0 > excess(hi)
  const double f0 = excess(0.0);
  if (f0 == 0.0) return 0.0;
  if (f0 > 0.0) {
    lo = 0.0;
    hi = 1.0;
    while (excess(hi) > 0.0) {
      lo = hi;
      if (hi >= kMaxLog) return kMaxLog;
      hi = std::min(2.0 * hi, kMaxLog);
    }
  } else {
    hi = 0.0;
    lo = -1.0;
    while (excess(lo) < 0.0) {
      hi = lo;
      if (lo <= kMinLog) {
        throw DomainError("chemical potential solve: target " + std::to_string(target) +
                          " needs mu closer to the fundamental mode than representable");
      }
      lo = std::max(2.0 * lo, kMinLog);
    }
  }

  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double f = excess(mid);
    if (std::abs(f) <= kSolveTol * target) return mid;
    (f > 0.0 ? lo : hi) = mid;
  }
  return std::abs(excess(lo)) <= std::abs(excess(hi)) ? lo : hi;
}

EngineeredDistribution make_result(const ModelSpec& spec, double x_low, double s) {
  EngineeredDistribution d;
  d.t_low_over_t = spec.x / x_low;
  d.log_one_minus_mu = s;
  d.mu = -std::expm1(s);
  d.occupations = occupations_at(x_low, s, spec.k_max);
  return d;
}

void check_ratio_below_one(double t_ratio, double inv_x, const char* what) {
  if (!(t_ratio > 0.0) || !(t_ratio < 1.0)) {
    throw DomainError(std::string(what) + ": requires 0 < T_low/T < 1");
  }
  if (!(inv_x > 0.0)) throw DomainError(std::string(what) + ": requires k_B T/(hbar Delta) > 0");
}

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("condensation curve: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw DomainError("condensation curve: grid values must be positive");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw DomainError("condensation curve: grid must be strictly increasing");
    }
  }
}

CondensationCurve build_curve(const ModelSpec& spec, const std::vector<double>& grid,
                              int threads, bool energy_branch) {
  spec.validate();
  check_grid(grid);
  ModelSpec base = spec;
  base.k_max = condensation_cutoff(spec, grid);

  CondensationCurve curve;
  curve.x = spec.x;
  curve.k_max = base.k_max;
  curve.fixed_number = total_number(thermal_occupations(base), Precision::Extended);
  const double e_th = thermal_energy(base, Precision::Extended);
  curve.points.resize(grid.size());

  parallel_for(grid.size(), threads, [&](std::size_t i) {
    CondensationPoint& p = curve.points[i];
    p.t_low_over_t = grid[i];
    const double x_low = spec.x / grid[i];
    if (energy_branch) {
      const double s = solve_log_mu(x_low, base.k_max, e_th, Moment::Energy);
      const OccupationVector n = occupations_at(x_low, s, base.k_max);
      p.mu_energy_constrained = -std::expm1(s);
      p.n_ph = total_number(n);
      p.fraction_energy_constrained = n[0] / p.n_ph;
    }
    const double s = solve_log_mu(x_low, base.k_max, curve.fixed_number, Moment::Number);
    const OccupationVector n = occupations_at(x_low, s, base.k_max);
    p.mu_fixed_n = -std::expm1(s);
    p.fraction_fixed_n = n[0] / total_number(n);
  });
  return curve;
}

}  // namespace

OccupationVector engineered_distribution(const ModelSpec& spec, double mu) {
  if (!(mu < 1.0)) {
    throw DomainError("engineered_distribution: mu must lie below the fundamental mode (mu < 1)");
  }
  spec.validate();
  const double x_low = spec.x_low();
  OccupationVector n(spec.k_max);
  for (int k = 1; k <= spec.k_max; ++k) n[k - 1] = bose_einstein(x_low * (k - mu));
  return n;
}

OccupationVector engineered_distribution_log(const ModelSpec& spec, double log_one_minus_mu) {
  spec.validate();
  if (!std::isfinite(log_one_minus_mu)) {
    throw DomainError("engineered_distribution_log: ln(1 - mu) must be finite");
  }
  return occupations_at(spec.x_low(), log_one_minus_mu, spec.k_max);
}

EngineeredDistribution solve_mu_for_number(const ModelSpec& spec, double n_target) {
  spec.validate();
  const double s = solve_log_mu(spec.x_low(), spec.k_max, n_target, Moment::Number);
  return make_result(spec, spec.x_low(), s);
}

EngineeredDistribution solve_mu_for_energy(const ModelSpec& spec) {
  spec.validate();
  const double e_th = thermal_energy(spec, Precision::Extended);
  const double s = solve_log_mu(spec.x_low(), spec.k_max, e_th, Moment::Energy);
  return make_result(spec, spec.x_low(), s);
}

double condensate_fraction(const OccupationVector& n) {
  if (n.empty()) throw DomainError("condensate_fraction: empty occupation vector");
  const double total = total_number(n);
  if (!(total > 0.0)) throw DomainError("condensate_fraction: total photon number is zero");
  return n[0] / total;
}

double tl_ground_occupation(double t_ratio, double inv_x) {
  check_ratio_below_one(t_ratio, inv_x, "tl_ground_occupation");
  return kZeta2 * inv_x * inv_x * (1.0 - t_ratio * t_ratio);
}

double tl_mu_eff(double t_ratio, double inv_x) {
  check_ratio_below_one(t_ratio, inv_x, "tl_mu_eff");
  return 1.0 - (1.0 / kZeta2) / (inv_x * inv_x) * (t_ratio * inv_x) / (1.0 - t_ratio * t_ratio);
}

double tl_excited_number(double t_ratio, double inv_x) {
  check_ratio_below_one(t_ratio, inv_x, "tl_excited_number");
  const double z = t_ratio * inv_x;
  if (!(z > 1.0)) throw DomainError("tl_excited_number: requires k_B T_low/(hbar Delta) > 1");
  return z * std::log(z);
}

HotLimitMu tl_mu_hot(double t_ratio) {
  if (!(t_ratio > 1.0) || !std::isfinite(t_ratio)) {
    throw DomainError("tl_mu_hot: requires T_low/T > 1");
  }
  return HotLimitMu{std::log(kZeta2 / (t_ratio * t_ratio)), t_ratio < 3.0};
}

int condensation_cutoff(const ModelSpec& spec, const std::vector<double>& t_ratio_grid) {
  int k = std::max(spec.k_max, default_cutoff(spec.x));
  for (double t : t_ratio_grid) {
    if (t > 0.0 && std::isfinite(t)) k = std::max(k, default_cutoff(spec.x / t));
  }
  return std::min(k, kMaxCutoff);
}

CondensationCurve condensation_curve(const ModelSpec& spec,
                                     const std::vector<double>& t_ratio_grid, int threads) {
  return build_curve(spec, t_ratio_grid, threads, true);
}

CondensationCurve equilibrium_comparison(const ModelSpec& spec,
                                         const std::vector<double>& t_ratio_grid, int threads) {
  return build_curve(spec, t_ratio_grid, threads, false);
}

std::vector<double> default_t_ratio_grid() {
  constexpr int kPoints = 200;
  const double lo = std::log(0.05);
  const double hi = std::log(2.0);
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) grid[i] = std::exp(lo + (hi - lo) * i / (kPoints - 1));
  grid.front() = 0.05;
  grid.back() = 2.0;
  return grid;
}

}  // namespace pfr
