#pragma once

#include <stdexcept>
#include <string>

namespace pfr {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Mean-field solve requested at G = 0, where the stationary manifold is
/// one-parameter. Use the closed-form engineered distribution instead.
class DegenerateSteadyState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotConverged : public std::runtime_error {
 public:
  NotConverged(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class CutoffNotConverged : public std::runtime_error {
 public:
  CutoffNotConverged(const std::string& what, int last_k_max)
      : std::runtime_error(what), last_k_max_(last_k_max) {}
  int last_k_max() const noexcept { return last_k_max_; }

 private:
  int last_k_max_;
};

/// Gillespie step requested in a configuration with zero total propensity.
class AbsorbingState : public std::runtime_error {
 public:
  AbsorbingState(const std::string& what, int trajectory)
      : std::runtime_error(what), trajectory_(trajectory) {}
  int trajectory() const noexcept { return trajectory_; }

 private:
  int trajectory_;
};

/// Spectral-range average over a transition whose effective temperature is
/// infinite or negative.
class FlaggedConstituent : public std::runtime_error {
 public:
  FlaggedConstituent(const std::string& what, int k)
      : std::runtime_error(what), k_(k) {}
  int k() const noexcept { return k_; }

 private:
  int k_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pfr
