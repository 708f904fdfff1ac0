#include "pfr/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pfr/constants.hpp"
#include "pfr/errors.hpp"

namespace pfr {

double bose_einstein(double x_arg) {
  if (!(x_arg > 0.0)) {
    throw DomainError("bose_einstein: nonpositive argument " +
                      std::to_string(x_arg));
  }
  if (x_arg < 1e-8) return 1.0 / x_arg - 0.5 + x_arg / 12.0;
  return 1.0 / std::expm1(x_arg);
}

void ModelSpec::validate() const {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("ModelSpec: x must be > 0");
  if (!(theta > 0.0)) throw DomainError("ModelSpec: theta must be > 0");
  if (!(r > 0.0)) throw DomainError("ModelSpec: r must be > 0");
  if (!(big_g >= 0.0)) throw DomainError("ModelSpec: G must be >= 0");
  if (k_max < 2) throw DomainError("ModelSpec: k_max must be >= 2");
}

int default_cutoff(double x) {
  if (!(x > 0.0)) throw DomainError("default_cutoff: x must be > 0");
  const double k = std::floor(40.0 / x) + 1.0;
  if (k > kMaxCutoff) return kMaxCutoff;
  return std::max(2, static_cast<int>(k));
}

void PhysicalInputs::validate() const {
  if (!(support_temperature > 0.0) || !(waste_temperature > 0.0)) {
    throw DomainError("PhysicalInputs: temperatures must be > 0");
  }
  if (!(mode_spacing > 0.0) || !(waste_frequency > 0.0)) {
    throw DomainError("PhysicalInputs: frequencies must be > 0");
  }
  if (quality_factor && !(*quality_factor > 0.0)) {
    throw DomainError("PhysicalInputs: quality factor must be > 0");
  }
  if (coupling_g && !(*coupling_g >= 0.0)) {
    throw DomainError("PhysicalInputs: coupling g must be >= 0");
  }
  if (waste_decay && !(*waste_decay > 0.0)) {
    throw DomainError("PhysicalInputs: waste decay must be > 0");
  }
  if (k_max && *k_max < 2) throw DomainError("PhysicalInputs: k_max must be >= 2");
  if (big_g_override && !(*big_g_override >= 0.0)) {
    throw DomainError("PhysicalInputs: G override must be >= 0");
  }
}

std::optional<double> PhysicalInputs::derived_big_g() const {
  if (!quality_factor || !coupling_g || !waste_decay) return std::nullopt;
  const double gamma = mode_spacing / *quality_factor;
  const double g2 = *coupling_g * *coupling_g;
  if (g2 == 0.0) return std::numeric_limits<double>::infinity();
  return gamma * *waste_decay / g2;
}

ModelSpec dimensionless_from_physical(const PhysicalInputs& inputs) {
  inputs.validate();
  ModelSpec spec;
  spec.x = si::hbar * inputs.mode_spacing /
           (si::boltzmann * inputs.support_temperature);
  spec.theta = inputs.waste_temperature / inputs.support_temperature;
  spec.r = inputs.waste_frequency / inputs.mode_spacing;
  if (inputs.big_g_override) {
    spec.big_g = *inputs.big_g_override;
  } else if (auto g = inputs.derived_big_g()) {
    spec.big_g = *g;
  } else {
    throw DomainError(
        "dimensionless_from_physical: G needs quality_factor, coupling_g and "
        "waste_decay, or an explicit override");
  }
  spec.k_max = inputs.k_max ? *inputs.k_max : default_cutoff(spec.x);
  return spec;
}

PhysicalInputs physical_from_dimensionless(const ModelSpec& spec,
                                           double support_temperature,
                                           double coupling_g,
                                           double waste_decay) {
  PhysicalInputs p;
  p.support_temperature = support_temperature;
  p.waste_temperature = spec.theta * support_temperature;
  p.mode_spacing = spec.x * si::boltzmann * support_temperature / si::hbar;
  p.waste_frequency = spec.r * p.mode_spacing;
  p.coupling_g = coupling_g;
  p.waste_decay = waste_decay;
  // G = (Delta / Q) Gamma / g^2
  p.quality_factor =
      p.mode_spacing * waste_decay / (spec.big_g * coupling_g * coupling_g);
  p.k_max = spec.k_max;
  return p;
}

RateSchedule make_schedule(const ModelSpec& spec) {
  spec.validate();
  RateSchedule s;
  const int K = spec.k_max;
  s.kappa.resize(K - 1);
  s.gamma.resize(K);
  for (int k = 1; k < K; ++k) {
    s.kappa[k - 1] = 1.0 / (static_cast<double>(k) * (k + 1));
  }
  for (int k = 1; k <= K; ++k) s.gamma[k - 1] = spec.big_g * k;
  s.n_w = waste_occupation(spec);
  s.n_th = thermal_occupations(spec);
  return s;
}

OccupationVector thermal_occupations(const ModelSpec& spec) {
  spec.validate();
  OccupationVector n(spec.k_max);
  for (int k = 1; k <= spec.k_max; ++k) n[k - 1] = bose_einstein(spec.x * k);
  return n;
}

double waste_occupation(const ModelSpec& spec) {
  spec.validate();
  return bose_einstein(spec.x * spec.r / spec.theta);
}

double thermal_energy(const ModelSpec& spec, Precision precision) {
  return total_energy(thermal_occupations(spec), precision);
}

double total_number(const OccupationVector& n) {
  double s = 0.0;
  for (double v : n) s += v;
  return s;
}

double total_energy(const OccupationVector& n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) s += static_cast<double>(i + 1) * n[i];
  return s;
}

namespace {

// Kahan-compensated long double accumulation.
template <typename Weight>
double extended_sum(const OccupationVector& n, Weight weight) {
  long double sum = 0.0L;
  long double carry = 0.0L;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const long double term = weight(i) * static_cast<long double>(n[i]) - carry;
    const long double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return static_cast<double>(sum);
}

}  // namespace

double total_number(const OccupationVector& n, Precision precision) {
  if (precision == Precision::Double) return total_number(n);
  return extended_sum(n, [](std::size_t) { return 1.0L; });
}

double total_energy(const OccupationVector& n, Precision precision) {
  if (precision == Precision::Double) return total_energy(n);
  return extended_sum(n, [](std::size_t i) { return static_cast<long double>(i + 1); });
}

}  // namespace pfr
