#pragma once

// Exact stochastic simulation of the classical master equation obtained
// from the diagonal (Fock-basis) dynamics of the cooling and thermal
// dissipators.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "pfr/model.hpp"

namespace pfr {

struct FockConfiguration {
  std::vector<std::int64_t> occupations;  // index k-1 holds mode k
  double time = 0.0;
};

enum class ChannelKind { CoolDown, CoolUp, Loss, Gain };

struct JumpChannel {
  ChannelKind kind = ChannelKind::CoolDown;
  int k = 1;
  double propensity = 0.0;
};

/// Nonzero channels in the fixed order: for k = 1..k_max, cool_down(k),
/// cool_up(k), loss(k), gain(k); cooling channels exist for k < k_max.
std::vector<JumpChannel> propensities(const FockConfiguration& c, const RateSchedule& sched);

/// Applies the occupation change of one jump. Time is left untouched.
void apply_jump(FockConfiguration& c, ChannelKind kind, int k);

/// One Gillespie step with uniforms r1, r2 in (0, 1]: time advances by
/// -ln(r1)/A and the first channel whose cumulative propensity reaches
/// r2*A fires. Throws AbsorbingState when A = 0.
FockConfiguration step(const FockConfiguration& c, const RateSchedule& sched, double r1,
                       double r2);

/// Uniform in (0, 1] from 64 random bits.
inline double unit_uniform(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// Counter-based seed for trajectory `index` of a run with `master` seed.
std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index);

/// Incremental engine over a fixed channel array. Draws (r1, r2) in the same
/// order as repeated calls to step(), so both produce the same trajectory.
class GillespieEngine {
 public:
  GillespieEngine(const RateSchedule& sched, FockConfiguration init, std::uint64_t seed);

  /// Fires every jump scheduled at or before time t and sets the clock to t.
  /// Afterwards state() is the configuration occupied at time t.
  void advance_to(double t);

  const FockConfiguration& state() const { return state_; }
  std::uint64_t jumps() const { return jumps_; }
  double total_propensity() const { return total_; }

 private:
  void refresh(int k_lo, int k_hi);
  void sum_and_schedule();

  RateSchedule sched_;
  FockConfiguration state_;
  std::mt19937_64 rng_;
  std::vector<double> a_;  // 4 entries per mode, in channel order
  double total_ = 0.0;
  double next_time_ = 0.0;
  int next_channel_ = -1;
  std::uint64_t jumps_ = 0;
};

using SampleObserver = std::function<void(const FockConfiguration&)>;

/// Runs one trajectory from `init`, discards t < burn_in_time and calls
/// `observe` at burn_in_time + i*sample_interval, i = 0..samples-1.
/// Returns the number of jumps.
std::uint64_t run_trajectory(const RateSchedule& sched, const FockConfiguration& init,
                             std::uint64_t seed, double burn_in_time, double sample_interval,
                             std::int64_t samples, const SampleObserver& observe);

struct McOptions {
  int n_trajectories = 4;
  std::optional<double> burn_in_time;  // default 20/gamma_1
  double sample_interval = 1.0;
  std::int64_t samples_per_trajectory = 10000;
  std::uint64_t master_seed = 0;
  int batches_per_trajectory = 10;
  int threads = 1;
  bool disable_cooling = false;
};

struct ModeEstimate {
  int k = 0;
  double mean = 0.0;
  double mean_stderr = 0.0;
  double g2 = 0.0;
  double g2_stderr = 0.0;
  bool g2_defined = false;
  std::vector<double> histogram;  // P(n), n = 0..size-1
};

struct McEstimate {
  std::vector<ModeEstimate> modes;
  std::int64_t samples = 0;
  std::uint64_t master_seed = 0;
  int n_trajectories = 0;
  int batches = 0;
  double burn_in_time = 0.0;
  double sample_interval = 0.0;
  std::uint64_t jumps = 0;
};

double default_burn_in(const ModelSpec& spec);

/// Steady-state estimates from independent trajectories started at the
/// rounded thermal occupations. Standard errors come from batch means over
/// contiguous sample blocks (batches_per_trajectory per trajectory).
McEstimate sample_steady(const ModelSpec& spec, const McOptions& opts);

struct G2Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  bool defined = false;
};

/// mean(n^2 - n)/mean(n)^2 with a leave-one-batch-out jackknife error.
/// Requires at least two samples; a zero mean yields defined = false.
G2Estimate g2_estimator(std::span<const std::int64_t> samples, int batches = 10);

}  // namespace pfr
