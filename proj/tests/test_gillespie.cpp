#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "dense_master.hpp"
#include "doctest.h"
#include "pfr/errors.hpp"
#include "pfr/gillespie.hpp"
#include "pfr/meanfield.hpp"

using doctest::Approx;
using namespace pfr;

namespace {

RateSchedule zero_temperature_pair() {
  RateSchedule s;
  s.kappa = {0.5};
  s.gamma = {1.0, 2.0};
  s.n_w = 0.0;
  s.n_th = {0.0, 0.0};
  return s;
}

double total(const std::vector<JumpChannel>& ch) {
  double a = 0.0;
  for (const auto& c : ch) a += c.propensity;
  return a;
}

}  // namespace

TEST_CASE("propensities of a single photon") {
  RateSchedule s = zero_temperature_pair();
  s.n_th = {0.3, 0.1};
  const FockConfiguration c{{0, 1}, 0.0};
  const auto ch = propensities(c, s);
  REQUIRE_FALSE(ch.empty());
  CHECK(ch[0].kind == ChannelKind::CoolDown);
  CHECK(ch[0].propensity == 0.5);
  for (const auto& j : ch) CHECK(j.kind != ChannelKind::CoolUp);
  bool loss2 = false;
  for (const auto& j : ch) {
    if (j.kind == ChannelKind::Loss && j.k == 2) {
      loss2 = true;
      CHECK(j.propensity == Approx(2.0 * 1.1));
    }
  }
  CHECK(loss2);
}

TEST_CASE("vacuum is absorbing at zero temperature") {
  const RateSchedule s = zero_temperature_pair();
  const FockConfiguration vac{{0, 0}, 0.0};
  CHECK(propensities(vac, s).empty());
  CHECK_THROWS_AS(step(vac, s, 0.5, 0.5), AbsorbingState);
}

TEST_CASE("total propensity equals the dense outflow rate") {
  const double x = 1.0, r = 2.0, theta = 1.0, g = 1.0;
  const RateSchedule s = make_schedule(ModelSpec{x, theta, r, g, 2});
  for (int a = 0; a <= 30; a += 3) {
    for (int b = 0; b <= 30; b += 5) {
      const double want = oracle::dense_two_mode_outflow(x, r, theta, g, a, b);
      CHECK(total(propensities(FockConfiguration{{a, b}, 0.0}, s)) == Approx(want).epsilon(1e-13));
    }
  }
}

TEST_CASE("single step bookkeeping") {
  RateSchedule s = zero_temperature_pair();
  s.gamma = {0.0, 0.0};
  const FockConfiguration c{{0, 1}, 0.0};
  // Only cool_down(1) is open with A = 1/2.
  for (double r2 : {1e-9, 0.5, 1.0}) {
    const auto next = step(c, s, std::exp(-1.0), r2);
    CHECK(next.occupations == std::vector<std::int64_t>{1, 0});
    CHECK(next.time == Approx(2.0));
  }
  RateSchedule t = zero_temperature_pair();
  t.kappa = {0.0};
  t.gamma = {0.0, 1.0};
  t.n_th = {0.0, 1.0};
  // Loss and gain of mode 2, A = 1*2 + 1*1*1 = 3 ... choose r1 = e^-1 with A = 2.
  t.n_th = {0.0, 0.0};
  const auto lost = step(FockConfiguration{{0, 2}, 1.0}, t, std::exp(-1.0), 0.3);
  CHECK(lost.occupations == std::vector<std::int64_t>{0, 1});
  CHECK(lost.time == Approx(1.5));
}

TEST_CASE("jump channels conserve or shift the photon number") {
  FockConfiguration c{{3, 4, 5}, 0.0};
  auto n = [&] { return std::accumulate(c.occupations.begin(), c.occupations.end(), 0LL); };
  apply_jump(c, ChannelKind::CoolDown, 1);
  CHECK(n() == 12);
  CHECK(c.occupations == std::vector<std::int64_t>{4, 3, 5});
  apply_jump(c, ChannelKind::CoolUp, 2);
  CHECK(n() == 12);
  apply_jump(c, ChannelKind::Loss, 3);
  CHECK(n() == 11);
  apply_jump(c, ChannelKind::Gain, 1);
  CHECK(n() == 12);
  FockConfiguration e{{0, 0}, 0.0};
  CHECK_THROWS(apply_jump(e, ChannelKind::Loss, 1));
}

TEST_CASE("uniform mapping and seeds") {
  CHECK(unit_uniform(0) > 0.0);
  CHECK(unit_uniform(~0ULL) == 1.0);
  CHECK(trajectory_seed(1, 0) != trajectory_seed(1, 1));
  CHECK(trajectory_seed(1, 0) != trajectory_seed(2, 0));
  CHECK(trajectory_seed(9, 3) == trajectory_seed(9, 3));
}

TEST_CASE("engine matches repeated steps") {
  const RateSchedule s = make_schedule(ModelSpec{0.5, 1.0, 2.0, 0.3, 4});
  const FockConfiguration init{{2, 1, 1, 0}, 0.0};
  GillespieEngine eng(s, init, 99);
  std::mt19937_64 rng(99);
  FockConfiguration c = init;
  for (int i = 0; i < 2000; ++i) {
    const double r1 = unit_uniform(rng());
    const double r2 = unit_uniform(rng());
    c = step(c, s, r1, r2);
  }
  // Advance the engine until it has performed the same number of jumps.
  double t = 0.0;
  while (eng.jumps() < 2000) {
    t += 1e-3;
    eng.advance_to(t);
  }
  CHECK(eng.jumps() == 2000);
  CHECK(eng.state().occupations == c.occupations);
}

TEST_CASE("g2 estimator") {
  std::vector<std::int64_t> ones(1000, 1);
  CHECK(g2_estimator(ones).value == 0.0);
  std::vector<std::int64_t> zeros(10, 0);
  CHECK_FALSE(g2_estimator(zeros).defined);
  std::mt19937_64 rng(5);
  std::geometric_distribution<std::int64_t> geo(1.0 / 6.0);
  std::vector<std::int64_t> thermal(400000);
  for (auto& v : thermal) v = geo(rng);
  const auto g = g2_estimator(thermal, 20);
  CHECK(g.defined);
  CHECK(g.value == Approx(2.0).epsilon(0.02));
  CHECK(g.stderr_ > 0.0);
  CHECK(std::abs(g.value - 2.0) < 5 * g.stderr_);
}

TEST_CASE("thermal-dominated sampling") {
  const ModelSpec s{1.0, 1.0, 2.0, 1e2, 3};
  McOptions o;
  o.n_trajectories = 2;
  o.samples_per_trajectory = 20000;
  o.sample_interval = 0.05;
  o.master_seed = 1;
  const auto est = sample_steady(s, o);
  const double nth = bose_einstein(1.0);
  CHECK(std::abs(est.modes[0].mean - nth) < 3 * est.modes[0].mean_stderr);
  for (const auto& m : est.modes) {
    const double mass = std::accumulate(m.histogram.begin(), m.histogram.end(), 0.0);
    CHECK(mass == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("two-mode histogram matches the dense master operator") {
  const double x = 1.0, r = 2.0, theta = 1.0, g = 1.0;
  const int cap = 30;
  const ModelSpec s{x, theta, r, g, 2};
  for (bool cooling : {true, false}) {
    RateSchedule sched = make_schedule(s);
    if (!cooling) sched.kappa = {0.0};
    const auto p = oracle::dense_two_mode_stationary(x, r, theta, g, cap, cooling);
    std::map<std::pair<int, int>, double> counts;
    const std::int64_t samples = 50000;
    run_trajectory(sched, FockConfiguration{{1, 0}, 0.0}, 17, 20.0, 2.0, samples,
                   [&](const FockConfiguration& c) {
                     counts[{static_cast<int>(c.occupations[0]), static_cast<int>(c.occupations[1])}] +=
                         1.0 / samples;
                   });
    double tv = 0.0;
    for (int a = 0; a <= cap; ++a) {
      for (int b = 0; b <= cap; ++b) {
        const auto it = counts.find({a, b});
        const double q = it == counts.end() ? 0.0 : it->second;
        tv += std::abs(q - p[a * (cap + 1) + b]);
      }
    }
    CHECK(0.5 * tv < 0.03);
  }
}

TEST_CASE("reproducibility across worker counts") {
  const ModelSpec s{0.5, 1.0, 3.0, 0.05, 5};
  McOptions o;
  o.n_trajectories = 3;
  o.samples_per_trajectory = 2000;
  o.master_seed = 42;
  o.burn_in_time = 10.0;
  const auto a = sample_steady(s, o);
  o.threads = 3;
  const auto b = sample_steady(s, o);
  REQUIRE(a.modes.size() == b.modes.size());
  for (std::size_t k = 0; k < a.modes.size(); ++k) {
    CHECK(a.modes[k].mean == b.modes[k].mean);
    CHECK(a.modes[k].g2 == b.modes[k].g2);
    CHECK(a.modes[k].mean_stderr == b.modes[k].mean_stderr);
  }
  CHECK(a.jumps == b.jumps);
  CHECK(default_burn_in(s) == Approx(20.0 / 0.05));
  CHECK_THROWS(default_burn_in(ModelSpec{0.5, 1.0, 3.0, 0.0, 5}));
}

TEST_CASE("standard errors are calibrated") {
  // Spread of independent estimates against the reported errors, pooled over
  // 60 master seeds so that the statistic itself has ~18% scatter.
  const ModelSpec s{0.5, 1.0, 3.0, 0.5, 4};
  std::vector<double> means;
  double err2 = 0.0;
  McOptions o;
  o.n_trajectories = 2;
  o.samples_per_trajectory = 2000;
  o.sample_interval = 0.5;
  o.burn_in_time = 20.0;
  for (int seed = 0; seed < 60; ++seed) {
    o.master_seed = 1000 + seed;
    const auto est = sample_steady(s, o);
    means.push_back(est.modes[0].mean);
    err2 += est.modes[0].mean_stderr * est.modes[0].mean_stderr;
  }
  const double n = static_cast<double>(means.size());
  const double m = std::accumulate(means.begin(), means.end(), 0.0) / n;
  double var = 0.0;
  for (double v : means) var += (v - m) * (v - m);
  const double chi2 = (var / (n - 1)) / (err2 / n);
  CHECK(chi2 > 0.5);
  CHECK(chi2 < 2.0);
  CHECK(m == Approx(steady_state(s).occupations[0]).epsilon(0.05));
}
