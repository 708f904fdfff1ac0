#include "pfr/gillespie.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pfr/errors.hpp"
#include "pfr/parallel.hpp"

namespace pfr {

namespace {

constexpr int kChannelsPerMode = 4;

// Propensities shared by the list API and the engine so both agree bit for bit.
inline double cool_down_rate(const RateSchedule& s, int k, std::int64_t nk, std::int64_t nk1) {
  return s.kappa[k - 1] * (s.n_w + 1.0) * static_cast<double>(nk + 1) *
         static_cast<double>(nk1);
}
inline double cool_up_rate(const RateSchedule& s, int k, std::int64_t nk, std::int64_t nk1) {
  return s.kappa[k - 1] * s.n_w * static_cast<double>(nk1 + 1) * static_cast<double>(nk);
}
inline double loss_rate(const RateSchedule& s, int k, std::int64_t nk) {
  return s.gamma[k - 1] * (s.n_th[k - 1] + 1.0) * static_cast<double>(nk);
}
inline double gain_rate(const RateSchedule& s, int k, std::int64_t nk) {
  return s.gamma[k - 1] * s.n_th[k - 1] * static_cast<double>(nk + 1);
}

void check_configuration(const FockConfiguration& c, const RateSchedule& sched) {
  if (static_cast<int>(c.occupations.size()) != sched.k_max()) {
    throw DomainError("Fock configuration length does not match k_max");
  }
  for (std::int64_t n : c.occupations) {
    if (n < 0) throw DomainError("Fock configuration has a negative occupation");
  }
}

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

FockConfiguration rounded_thermal(const RateSchedule& sched) {
  FockConfiguration c;
  c.occupations.resize(sched.k_max());
  for (int i = 0; i < sched.k_max(); ++i) c.occupations[i] = std::llround(sched.n_th[i]);
  return c;
}

// Per-trajectory accumulators, one block per batch.
struct BatchSums {
  std::vector<double> sum_n;   // [batch * K + mode]
  std::vector<double> sum_ff;  // n (n - 1)
  std::vector<std::int64_t> count;
};

struct TrajectoryResult {
  BatchSums batches;
  std::vector<std::vector<std::int64_t>> histogram;  // per mode
  std::uint64_t jumps = 0;
};

}  // namespace

std::vector<JumpChannel> propensities(const FockConfiguration& c, const RateSchedule& sched) {
  check_configuration(c, sched);
  const int K = sched.k_max();
  const auto& n = c.occupations;
  std::vector<JumpChannel> out;
  out.reserve(kChannelsPerMode * K);
  auto push = [&](ChannelKind kind, int k, double a) {
    if (a > 0.0) out.push_back(JumpChannel{kind, k, a});
  };
  for (int k = 1; k <= K; ++k) {
    if (k < K) {
      push(ChannelKind::CoolDown, k, cool_down_rate(sched, k, n[k - 1], n[k]));
      push(ChannelKind::CoolUp, k, cool_up_rate(sched, k, n[k - 1], n[k]));
    }
    push(ChannelKind::Loss, k, loss_rate(sched, k, n[k - 1]));
    push(ChannelKind::Gain, k, gain_rate(sched, k, n[k - 1]));
  }
  return out;
}

void apply_jump(FockConfiguration& c, ChannelKind kind, int k) {
  auto& n = c.occupations;
  const int K = static_cast<int>(n.size());
  const bool link = kind == ChannelKind::CoolDown || kind == ChannelKind::CoolUp;
  if (k < 1 || k > (link ? K - 1 : K)) throw DomainError("apply_jump: mode index out of range");
  switch (kind) {
    case ChannelKind::CoolDown:
      if (n[k] <= 0) throw DomainError("apply_jump: cool_down from an empty mode");
      ++n[k - 1];
      --n[k];
      break;
    case ChannelKind::CoolUp:
      if (n[k - 1] <= 0) throw DomainError("apply_jump: cool_up from an empty mode");
      --n[k - 1];
      ++n[k];
      break;
    case ChannelKind::Loss:
      if (n[k - 1] <= 0) throw DomainError("apply_jump: loss from an empty mode");
      --n[k - 1];
      break;
    case ChannelKind::Gain:
      ++n[k - 1];
      break;
  }
}

FockConfiguration step(const FockConfiguration& c, const RateSchedule& sched, double r1,
                       double r2) {
  if (!(r1 > 0.0 && r1 <= 1.0) || !(r2 > 0.0 && r2 <= 1.0)) {
    throw DomainError("step: uniforms must lie in (0, 1]");
  }
  const std::vector<JumpChannel> channels = propensities(c, sched);
  double total = 0.0;
  for (const auto& ch : channels) total += ch.propensity;
  if (!(total > 0.0)) throw AbsorbingState("step: total propensity is zero", -1);

  FockConfiguration next = c;
  next.time = c.time - std::log(r1) / total;
  const double target = r2 * total;
  double cumulative = 0.0;
  std::size_t chosen = channels.size() - 1;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    cumulative += channels[i].propensity;
    if (cumulative >= target) {
      chosen = i;
      break;
    }
  }
  apply_jump(next, channels[chosen].kind, channels[chosen].k);
  return next;
}

std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

GillespieEngine::GillespieEngine(const RateSchedule& sched, FockConfiguration init,
                                 std::uint64_t seed)
    : sched_(sched), state_(std::move(init)), rng_(seed) {
  check_configuration(state_, sched_);
  a_.assign(static_cast<std::size_t>(kChannelsPerMode) * sched_.k_max(), 0.0);
  refresh(1, sched_.k_max());
  sum_and_schedule();
}

void GillespieEngine::refresh(int k_lo, int k_hi) {
  const int K = sched_.k_max();
  const auto& n = state_.occupations;
  k_lo = std::max(k_lo, 1);
  k_hi = std::min(k_hi, K);
  for (int k = k_lo; k <= k_hi; ++k) {
    double* a = &a_[static_cast<std::size_t>(kChannelsPerMode) * (k - 1)];
    a[0] = k < K ? cool_down_rate(sched_, k, n[k - 1], n[k]) : 0.0;
    a[1] = k < K ? cool_up_rate(sched_, k, n[k - 1], n[k]) : 0.0;
    a[2] = loss_rate(sched_, k, n[k - 1]);
    a[3] = gain_rate(sched_, k, n[k - 1]);
  }
}

void GillespieEngine::sum_and_schedule() {
  double total = 0.0;
  for (double a : a_) total += a;
  total_ = total;
  if (!(total_ > 0.0)) {
    next_channel_ = -1;
    next_time_ = std::numeric_limits<double>::infinity();
    return;
  }
  const double r1 = unit_uniform(rng_());
  const double r2 = unit_uniform(rng_());
  next_time_ = state_.time - std::log(r1) / total_;
  const double target = r2 * total_;
  double cumulative = 0.0;
  int chosen = -1;
  for (std::size_t i = 0; i < a_.size(); ++i) {
    cumulative += a_[i];
    if (a_[i] > 0.0) chosen = static_cast<int>(i);
    if (cumulative >= target && a_[i] > 0.0) break;
  }
  next_channel_ = chosen;
}

void GillespieEngine::advance_to(double t) {
  while (next_time_ <= t) {
    if (next_channel_ < 0) throw AbsorbingState("Gillespie trajectory reached an absorbing state", -1);
    const int k = next_channel_ / kChannelsPerMode + 1;
    const auto kind = static_cast<ChannelKind>(next_channel_ % kChannelsPerMode);
    state_.time = next_time_;
    apply_jump(state_, kind, k);
    ++jumps_;
    if (kind == ChannelKind::CoolDown || kind == ChannelKind::CoolUp) {
      refresh(k - 1, k + 1);
    } else {
      refresh(k - 1, k);
    }
    sum_and_schedule();
  }
  if (total_ == 0.0) {
    throw AbsorbingState("Gillespie trajectory reached an absorbing state", -1);
  }
  state_.time = t;
}

std::uint64_t run_trajectory(const RateSchedule& sched, const FockConfiguration& init,
                             std::uint64_t seed, double burn_in_time, double sample_interval,
                             std::int64_t samples, const SampleObserver& observe) {
  if (!(burn_in_time > 0.0)) throw DomainError("run_trajectory: burn-in time must be > 0");
  if (!(sample_interval > 0.0)) throw DomainError("run_trajectory: sample interval must be > 0");
  if (samples < 1) throw DomainError("run_trajectory: need at least one sample");
  GillespieEngine engine(sched, init, seed);
  const double t0 = init.time;
  for (std::int64_t i = 0; i < samples; ++i) {
    engine.advance_to(t0 + burn_in_time + static_cast<double>(i) * sample_interval);
    observe(engine.state());
  }
  return engine.jumps();
}

double default_burn_in(const ModelSpec& spec) {
  if (!(spec.big_g > 0.0)) {
    throw DomainError("default burn-in needs G > 0; pass an explicit burn-in time");
  }
  return 20.0 / spec.big_g;
}

McEstimate sample_steady(const ModelSpec& spec, const McOptions& opts) {
  spec.validate();
  if (opts.n_trajectories < 1) throw DomainError("sample_steady: need at least one trajectory");
  if (opts.samples_per_trajectory < 1) {
    throw DomainError("sample_steady: samples_per_trajectory must be >= 1");
  }
  if (opts.batches_per_trajectory < 1 ||
      opts.batches_per_trajectory > opts.samples_per_trajectory) {
    throw DomainError("sample_steady: batches_per_trajectory must lie in 1..samples");
  }
  const double burn_in = opts.burn_in_time ? *opts.burn_in_time : default_burn_in(spec);
  if (!(burn_in > 0.0)) throw DomainError("sample_steady: burn-in time must be > 0");

  RateSchedule sched = make_schedule(spec);
  if (opts.disable_cooling) std::fill(sched.kappa.begin(), sched.kappa.end(), 0.0);
  const FockConfiguration init = rounded_thermal(sched);
  const int K = sched.k_max();
  const int nb = opts.batches_per_trajectory;
  const std::int64_t S = opts.samples_per_trajectory;

  std::vector<TrajectoryResult> results(opts.n_trajectories);
  parallel_for(results.size(), opts.threads, [&](std::size_t t) {
    TrajectoryResult& res = results[t];
    res.batches.sum_n.assign(static_cast<std::size_t>(nb) * K, 0.0);
    res.batches.sum_ff.assign(static_cast<std::size_t>(nb) * K, 0.0);
    res.batches.count.assign(nb, 0);
    res.histogram.assign(K, {});
    std::int64_t index = 0;
    auto observe = [&](const FockConfiguration& c) {
      const int b = static_cast<int>(index * nb / S);
      ++index;
      ++res.batches.count[b];
      for (int m = 0; m < K; ++m) {
        const std::int64_t n = c.occupations[m];
        res.batches.sum_n[static_cast<std::size_t>(b) * K + m] += static_cast<double>(n);
        res.batches.sum_ff[static_cast<std::size_t>(b) * K + m] +=
            static_cast<double>(n) * static_cast<double>(n - 1);
        auto& h = res.histogram[m];
        if (static_cast<std::size_t>(n) >= h.size()) h.resize(n + 1, 0);
        ++h[n];
      }
    };
    try {
      res.jumps = run_trajectory(sched, init, trajectory_seed(opts.master_seed, t), burn_in,
                                 opts.sample_interval, S, observe);
    } catch (const AbsorbingState& e) {
      throw AbsorbingState(std::string(e.what()) + " (trajectory " + std::to_string(t) + ")",
                           static_cast<int>(t));
    }
  });

  McEstimate est;
  est.master_seed = opts.master_seed;
  est.n_trajectories = opts.n_trajectories;
  est.burn_in_time = burn_in;
  est.sample_interval = opts.sample_interval;
  est.samples = S * opts.n_trajectories;
  est.batches = nb * opts.n_trajectories;
  for (const auto& r : results) est.jumps += r.jumps;

  const int B = est.batches;
  for (int m = 0; m < K; ++m) {
    std::vector<double> bn(B), bff(B), bc(B);
    double tn = 0.0, tff = 0.0, tc = 0.0;
    for (int t = 0; t < opts.n_trajectories; ++t) {
      for (int b = 0; b < nb; ++b) {
        const int i = t * nb + b;
        bn[i] = results[t].batches.sum_n[static_cast<std::size_t>(b) * K + m];
        bff[i] = results[t].batches.sum_ff[static_cast<std::size_t>(b) * K + m];
        bc[i] = static_cast<double>(results[t].batches.count[b]);
        tn += bn[i];
        tff += bff[i];
        tc += bc[i];
      }
    }
    ModeEstimate me;
    me.k = m + 1;
    me.mean = tn / tc;
    if (B >= 2) {
      double s2 = 0.0;
      for (int i = 0; i < B; ++i) {
        const double d = bn[i] / bc[i] - me.mean;
        s2 += d * d;
      }
      me.mean_stderr = std::sqrt(s2 / (B - 1) / B);
    } else {
      me.mean_stderr = std::numeric_limits<double>::infinity();
    }
    me.g2_defined = tn > 0.0;
    if (me.g2_defined) {
      me.g2 = (tff / tc) / (me.mean * me.mean);
      if (B >= 2) {
        std::vector<double> jack(B);
        double jm = 0.0;
        for (int i = 0; i < B; ++i) {
          const double c = tc - bc[i];
          const double mu = (tn - bn[i]) / c;
          jack[i] = mu > 0.0 ? ((tff - bff[i]) / c) / (mu * mu) : me.g2;
          jm += jack[i];
        }
        jm /= B;
        double s2 = 0.0;
        for (double j : jack) s2 += (j - jm) * (j - jm);
        me.g2_stderr = std::sqrt(s2 * (B - 1) / B);
      } else {
        me.g2_stderr = std::numeric_limits<double>::infinity();
      }
    } else {
      me.g2 = std::numeric_limits<double>::quiet_NaN();
      me.g2_stderr = std::numeric_limits<double>::quiet_NaN();
    }
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.histogram[m].size());
    std::vector<std::int64_t> counts(width, 0);
    for (const auto& r : results) {
      for (std::size_t n = 0; n < r.histogram[m].size(); ++n) counts[n] += r.histogram[m][n];
    }
    me.histogram.resize(width);
    for (std::size_t n = 0; n < width; ++n) me.histogram[n] = counts[n] / tc;
    est.modes.push_back(std::move(me));
  }
  return est;
}

G2Estimate g2_estimator(std::span<const std::int64_t> samples, int batches) {
  const std::int64_t S = static_cast<std::int64_t>(samples.size());
  if (S < 2) throw DomainError("g2_estimator: need at least two samples");
  const int B = static_cast<int>(std::clamp<std::int64_t>(batches, 2, S));
  std::vector<double> bn(B, 0.0), bff(B, 0.0), bc(B, 0.0);
  for (std::int64_t i = 0; i < S; ++i) {
    const int b = static_cast<int>(i * B / S);
    const double n = static_cast<double>(samples[i]);
    bn[b] += n;
    bff[b] += n * (n - 1.0);
    bc[b] += 1.0;
  }
  double tn = 0.0, tff = 0.0, tc = 0.0;
  for (int b = 0; b < B; ++b) {
    tn += bn[b];
    tff += bff[b];
    tc += bc[b];
  }
  G2Estimate g;
  if (!(tn > 0.0)) {
    g.value = std::numeric_limits<double>::quiet_NaN();
    g.stderr_ = std::numeric_limits<double>::quiet_NaN();
    return g;
  }
  g.defined = true;
  const double mean = tn / tc;
  g.value = (tff / tc) / (mean * mean);
  std::vector<double> jack(B);
  double jm = 0.0;
  for (int b = 0; b < B; ++b) {
    const double c = tc - bc[b];
    const double mu = (tn - bn[b]) / c;
    jack[b] = mu > 0.0 ? ((tff - bff[b]) / c) / (mu * mu) : g.value;
    jm += jack[b];
  }
  jm /= B;
  double s2 = 0.0;
  for (double j : jack) s2 += (j - jm) * (j - jm);
  g.stderr_ = std::sqrt(s2 * (B - 1) / B);
  return g;
}

}  // namespace pfr
