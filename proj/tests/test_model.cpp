#include <cmath>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "pfr/constants.hpp"
#include "pfr/errors.hpp"
#include "pfr/model.hpp"

using doctest::Approx;
using namespace pfr;

TEST_CASE("bose_einstein reference values") {
  CHECK(bose_einstein(std::log(2.0)) == Approx(1.0).epsilon(1e-15));
  CHECK(bose_einstein(50.0) == Approx(std::exp(-50.0)).epsilon(1e-12));
  CHECK(bose_einstein(0.05) == Approx(19.504166493065889).epsilon(1e-14));
  CHECK_THROWS_AS(bose_einstein(0.0), DomainError);
  CHECK_THROWS_AS(bose_einstein(-1.0), DomainError);
}

TEST_CASE("bose_einstein branches agree at the series switchover") {
  const double a = 1e-8;
  const double series = bose_einstein(a * (1.0 - 1e-12));
  const double direct = bose_einstein(a * (1.0 + 1e-12));
  CHECK(std::abs(series - direct) / direct < 1e-10);
  CHECK(std::abs(bose_einstein(a) - static_cast<double>(oracle::bose_einstein(a))) / (1.0 / a) <
        1e-12);
}

TEST_CASE("bose_einstein is positive and strictly decreasing") {
  double prev = std::numeric_limits<double>::infinity();
  for (double a = 1e-10; a < 700.0; a *= 1.37) {
    const double v = bose_einstein(a);
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("dimensionless conversion from laboratory units") {
  PhysicalInputs p;
  p.support_temperature = 50 * si::millikelvin;
  p.waste_temperature = 50 * si::millikelvin;
  p.mode_spacing = 60 * si::mhz_to_angular;
  p.waste_frequency = 180 * si::mhz_to_angular;
  p.big_g_override = 1e-6;
  const ModelSpec s = dimensionless_from_physical(p);
  CHECK(s.x == Approx(0.0575909).epsilon(1e-5));
  CHECK(1.0 / s.x == Approx(17.36).epsilon(1e-3));
  CHECK(s.theta == 1.0);
  CHECK(s.r == Approx(3.0).epsilon(1e-14));
  CHECK(s.k_max == default_cutoff(s.x));

  SUBCASE("G from the quality factor, waste decay and coupling") {
    PhysicalInputs q = p;
    q.big_g_override.reset();
    q.mode_spacing = 11 * si::mhz_to_angular;
    q.quality_factor = 5e6;
    q.waste_decay = 1.8 * si::mhz_to_angular;
    q.coupling_g = 0.77 * si::mhz_to_angular;
    // (Delta/Q) Gamma / g^2 = (11/5e6)(1.8)/0.77^2 in units of MHz
    CHECK(dimensionless_from_physical(q).big_g == Approx(11.0 / 5e6 * 1.8 / (0.77 * 0.77)));
    q.coupling_g = 0.0;
    CHECK(std::isinf(dimensionless_from_physical(q).big_g));
  }
  SUBCASE("missing G inputs") {
    PhysicalInputs q = p;
    q.big_g_override.reset();
    CHECK_THROWS_AS(dimensionless_from_physical(q), DomainError);
  }
}

TEST_CASE("physical round trip") {
  const ModelSpec s{0.2, 1.5, 4.0, 3e-3, 50};
  const PhysicalInputs p = physical_from_dimensionless(s, 0.03, 1e6, 2e7);
  const ModelSpec t = dimensionless_from_physical(p);
  CHECK(t.x == Approx(s.x).epsilon(1e-13));
  CHECK(t.theta == Approx(s.theta).epsilon(1e-13));
  CHECK(t.r == Approx(s.r).epsilon(1e-13));
  CHECK(t.big_g == Approx(s.big_g).epsilon(1e-12));
  CHECK(t.k_max == 50);
}

TEST_CASE("thermal and waste occupations") {
  ModelSpec s{0.05, 1.0, 3.0, 1.0, 10};
  const auto n = thermal_occupations(s);
  CHECK(n[0] == Approx(19.504166493065889).epsilon(1e-14));
  CHECK(n[1] == Approx(9.5083319447750496).epsilon(1e-14));
  for (std::size_t i = 1; i < n.size(); ++i) CHECK(n[i] < n[i - 1]);
  CHECK(waste_occupation(s) == Approx(6.1791619816764157).epsilon(1e-14));
  s.r = std::log(2.0) / 0.05;
  CHECK(waste_occupation(s) == Approx(1.0).epsilon(1e-13));
  s.r = 1e5;
  CHECK(waste_occupation(s) < 1e-100);
  s = ModelSpec{100.0, 1.0, 1.0, 1.0, 4};
  for (double v : thermal_occupations(s)) CHECK(v < 1e-43);
}

TEST_CASE("thermal energy") {
  ModelSpec s{0.05, 1.0, 3.0, 1.0, 400};
  CHECK(thermal_energy(s) == Approx(648.01527650123415).epsilon(1e-13));
  CHECK(thermal_energy(s, Precision::Extended) == Approx(648.01527650123415).epsilon(1e-15));
  CHECK(thermal_energy(s) == total_energy(thermal_occupations(s)));
  s.k_max = 2000;
  const double asym = M_PI * M_PI / (6 * 0.05 * 0.05) - 1 / (2 * 0.05);
  CHECK(std::abs(thermal_energy(s) - asym) < 1.0);

  ModelSpec cold{12.0, 1.0, 1.0, 1.0, 8};
  CHECK(thermal_energy(cold) == Approx(std::exp(-12.0)).epsilon(1e-5));

  double prev = 0.0;
  for (double x : {2.0, 1.0, 0.5, 0.2, 0.1, 0.05, 0.02}) {
    const ModelSpec t{x, 1.0, 1.0, 1.0, default_cutoff(x)};
    const double e = thermal_energy(t);
    CHECK(std::isfinite(e));
    CHECK(e > prev);
    prev = e;
  }
}

TEST_CASE("rate schedule") {
  const ModelSpec s{0.3, 1.0, 2.0, 0.25, 6};
  const RateSchedule r = make_schedule(s);
  CHECK(r.k_max() == 6);
  REQUIRE(r.kappa.size() == 5);
  CHECK(r.kappa[0] == 0.5);
  CHECK(r.kappa[4] == Approx(1.0 / 30.0));
  CHECK(r.gamma[5] == Approx(1.5));
  CHECK(r.n_w == bose_einstein(0.6));
}

TEST_CASE("model validation and cutoff defaults") {
  CHECK_THROWS_AS((ModelSpec{0.0, 1, 1, 1, 4}.validate()), DomainError);
  CHECK_THROWS_AS((ModelSpec{1.0, 1, 1, -1, 4}.validate()), DomainError);
  CHECK_THROWS_AS((ModelSpec{1.0, 1, 1, 1, 1}.validate()), DomainError);
  CHECK(default_cutoff(1.0) == 41);
  CHECK(default_cutoff(0.0576) == 695);
  CHECK(default_cutoff(1e-6) == kMaxCutoff);
  CHECK(default_cutoff(100.0) == 2);
}

TEST_CASE("extended precision sums") {
  std::vector<double> n(100000, 0.1);
  n[0] = 1e8;
  const double plain = total_number(n);
  const double ext = total_number(n, Precision::Extended);
  CHECK(std::abs(ext - (1e8 + 9999.9)) <= std::abs(plain - (1e8 + 9999.9)));
  CHECK(total_energy(std::vector<double>{1, 1, 1}, Precision::Extended) == 6.0);
}
