#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pfr/crossover.hpp"
#include "pfr/errors.hpp"
#include "pfr/meanfield.hpp"

using doctest::Approx;
using namespace pfr;

TEST_CASE("Lambert W principal branch") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(std::numbers::e) == Approx(1.0).epsilon(1e-15));
  CHECK(lambert_w0(1.0) == Approx(0.56714329040978387).epsilon(1e-15));
  CHECK(lambert_w0(1000.0) == Approx(5.2496028524015962).epsilon(1e-15));
  CHECK(lambert_w0(-1.0 / std::numbers::e) == Approx(-1.0).epsilon(1e-7));
  CHECK_THROWS_AS(lambert_w0(-0.5), DomainError);
  for (double z = 1e-8; z <= 1e12; z *= 1.9) {
    const double w = lambert_w0(z);
    CHECK(std::abs(w * std::exp(w) - z) <= 1e-13 * std::max(z, 1.0));
  }
  for (double z : {-0.3, -0.1, -1e-3}) {
    const double w = lambert_w0(z);
    CHECK(std::abs(w * std::exp(w) - z) <= 1e-13);
  }
  CHECK(lambert_w0_of_exp(std::log(1000.0)) == Approx(lambert_w0(1000.0)).epsilon(1e-14));
  CHECK(lambert_w0_of_exp(2000.0) == Approx(2000.0 - std::log(2000.0)).epsilon(1e-3));
  const double a = lambert_w0(1e10), b = lambert_w0(4e10);
  CHECK(b - a == Approx(std::log(4.0)).epsilon(0.1));
}

TEST_CASE("implicit and closed crossover agree") {
  for (double g : {1e-2, 1e-4, 1e-6, 1e-8}) {
    for (double r : {1.5, 3.0, 10.0}) {
      const ModelSpec s{0.0576, 1.0, r, g, 5000};
      const auto kc = kc_implicit(s);
      if (!kc || *kc <= 5.0) continue;
      CHECK(std::abs(kc_closed(s) - *kc) / *kc < 0.1);
    }
  }
}

TEST_CASE("crossover grows sublinearly in -log G") {
  const ModelSpec base{0.0576, 1.0, 3.0, 1e-6, 5000};
  double k[3];
  int i = 0;
  for (double g : {1e-6, 1e-7, 1e-8}) {
    ModelSpec s = base;
    s.big_g = g;
    k[i++] = kc_closed(s);
  }
  CHECK(k[1] > k[0]);
  CHECK(k[2] > k[1]);
  CHECK(k[2] / k[0] < 8.0 / 6.0 * 2.0);
}

TEST_CASE("rate-unit invariance and domain") {
  const ModelSpec s{0.0576, 1.0, 3.0, 1e-6, 695};
  CHECK(kc_closed(s) == kc_closed(s));
  ModelSpec below = s;
  below.r = 1.0;
  CHECK_THROWS_AS(kc_implicit(below), DomainError);
  CHECK_THROWS_AS(kc_closed(below), DomainError);
}

TEST_CASE("energy profile landmarks") {
  OccupationVector n(40);
  for (int k = 1; k <= 40; ++k) n[k - 1] = (k <= 5 ? 50.0 / k : 0.0) + 20.0 * std::exp(-std::pow((k - 20) / 6.0, 2)) / k;
  const auto dip = energy_dip(n);
  const auto peak = kc_numeric(n);
  REQUIRE(dip);
  REQUIRE(peak);
  CHECK(*dip > 3.0);
  CHECK(*dip < 12.0);
  CHECK(*peak == Approx(20.0).epsilon(0.05));
  CHECK_FALSE(kc_numeric(OccupationVector{5, 4, 3, 2, 1}).has_value());
}

TEST_CASE("full crossover report") {
  const ModelSpec s{0.0575909, 1.0, 3.0, 1e-6, 695};
  const auto r = crossover(s);
  REQUIRE(r.kc_implicit);
  REQUIRE(r.kc_numeric);
  CHECK(*r.kc_implicit == Approx(r.kc_closed).epsilon(1e-9));
  CHECK(*r.kc_numeric > *r.kc_implicit);
  CHECK(r.spec.k_max >= 695);
}
