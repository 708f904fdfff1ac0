#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "pfr/equilibria.hpp"
#include "pfr/errors.hpp"
#include "pfr/meanfield.hpp"

using doctest::Approx;
using namespace pfr;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("engineered distribution") {
  const ModelSpec same{0.08, 2.0, 2.0, 0.0, 300};
  const auto eng = engineered_distribution(same, 0.0);
  const auto th = thermal_occupations(same);
  for (int k = 0; k < same.k_max; ++k) CHECK(eng[k] == Approx(th[k]).epsilon(1e-14));

  const ModelSpec s{0.05, 1.0, 3.0, 0.0, 10};
  CHECK(engineered_distribution(s, 0.9)[0] == Approx(66.167916661979192).epsilon(1e-12));
  const auto near = engineered_distribution(s, 1.0 - 1e-12);
  CHECK(near[0] > 1e12);
  CHECK(near[1] < 10.0);
  CHECK_THROWS_AS(engineered_distribution(s, 1.0), DomainError);

  const auto viaLog = engineered_distribution_log(s, std::log1p(-0.9));
  CHECK(viaLog[3] == Approx(engineered_distribution(s, 0.9)[3]).epsilon(1e-13));
}

TEST_CASE("engineered distribution is a G = 0 fixed point") {
  for (double x : {0.01, 0.05, 0.3, 1.0}) {
    for (double r : {1.25, 3.0, 20.0}) {
      for (double mu : {-3.0, 0.0, 0.7, 0.999}) {
        const ModelSpec s{x, 1.0, r, 0.0, 200};
        const auto n = engineered_distribution(s, mu);
        const auto sched = make_schedule(s);
        for (double j : currents(n, sched)) CHECK(std::abs(j) <= 1e-12 * std::max(1.0, n[0]));
      }
    }
  }
}

TEST_CASE("chemical potential for a photon number") {
  const ModelSpec s{0.05, 1.0, 3.0, 0.0, 400};
  const double n0 = total_number(engineered_distribution(s, 0.0));
  CHECK(solve_mu_for_number(s, n0).mu == Approx(0.0).epsilon(1e-10));

  const auto hundred = solve_mu_for_number(s, 100.0);
  CHECK(total_number(engineered_distribution(s, hundred.mu)) == Approx(100.0).epsilon(1e-10));
  CHECK(hundred.t_low_over_t == Approx(1.0 / 3.0));

  const auto dilute = solve_mu_for_number(s, 1e-200);
  CHECK(dilute.mu < -1e3);
  const auto dense = solve_mu_for_number(s, 1e9);
  CHECK(dense.mu < 1.0);
  CHECK(total_number(dense.occupations) == Approx(1e9).epsilon(1e-10));
}

TEST_CASE("chemical potential for the thermal energy") {
  const ModelSpec same{0.05, 1.0, 1.0, 0.0, 1000};
  const auto e0 = solve_mu_for_energy(same);
  CHECK(std::abs(e0.mu) < 1e-9);

  const ModelSpec half{0.006, 1.0, 2.0, 0.0, default_cutoff(0.006)};
  const auto h = solve_mu_for_energy(half);
  CHECK(condensate_fraction(h.occupations) > 0.9);
  CHECK(total_energy(h.occupations, Precision::Extended) ==
        Approx(thermal_energy(half, Precision::Extended)).epsilon(1e-10));

  const ModelSpec hot{0.006, 1.0, 0.1, 0.0, 20000};
  const auto hh = solve_mu_for_energy(hot);
  CHECK(condensate_fraction(hh.occupations) < 0.01);
  const double beta_low_mu = hot.x_low() * hh.mu;
  CHECK(beta_low_mu == Approx(tl_mu_hot(10.0).beta_low_mu).epsilon(0.1));
}

TEST_CASE("condensate fraction") {
  CHECK(condensate_fraction(OccupationVector{5, 0, 0}) == 1.0);
  CHECK(condensate_fraction(OccupationVector{1, 1, 1, 1}) == 0.25);
  CHECK_THROWS_AS(condensate_fraction(OccupationVector{0, 0}), DomainError);
  const ModelSpec s{0.0576, 1.0, 1.0, 0.0, 695};
  const auto th = thermal_occupations(s);
  CHECK(condensate_fraction(th) == Approx(th[0] / total_number(th)));
  CHECK(condensate_fraction(th) < 0.5 * condensate_fraction(solve_mu_for_energy(ModelSpec{0.0576, 1.0, 3.0, 0.0, 695}).occupations));
}

TEST_CASE("thermodynamic-limit closed forms") {
  CHECK(tl_ground_occupation(1.0 / 3.0, 20.0) == Approx(584.86544599048051).epsilon(1e-12));
  CHECK(tl_ground_occupation(0.999999, 20.0) < 2e-3);
  CHECK(tl_ground_occupation(0.5, 40.0) == Approx(4 * tl_ground_occupation(0.5, 20.0)));
  CHECK_THROWS_AS(tl_ground_occupation(1.0, 20.0), DomainError);

  CHECK(tl_mu_eff(1.0 / 3.0, 20.0) == Approx(0.98860136684023700).epsilon(1e-12));
  CHECK(tl_mu_eff(0.5, 1e6) == Approx(1.0).epsilon(1e-6));

  CHECK(tl_excited_number(0.8, 167.0) == Approx(653.95199488330006).epsilon(1e-12));
  CHECK(tl_excited_number(1.0 / 2.0, 2 * std::numbers::e) == Approx(std::numbers::e));
  CHECK_THROWS_AS(tl_excited_number(0.5, 1.5), DomainError);
  const double r1 = tl_excited_number(0.5, 1e2) / tl_ground_occupation(0.5, 1e2);
  const double r2 = tl_excited_number(0.5, 1e4) / tl_ground_occupation(0.5, 1e4);
  CHECK(r2 < r1 / 10);

  CHECK(tl_mu_hot(kPi / std::sqrt(6.0)).beta_low_mu == Approx(0.0).epsilon(1e-15));
  CHECK(tl_mu_hot(10.0).beta_low_mu == Approx(-4.1074698835173460).epsilon(1e-12));
  CHECK(tl_mu_hot(2.0).approximate);
  CHECK_FALSE(tl_mu_hot(5.0).approximate);
  CHECK_THROWS_AS(tl_mu_hot(1.0), DomainError);
}

TEST_CASE("closed forms agree with finite systems") {
  // Mode-1 occupation at the thermodynamic-limit chemical potential.
  for (double inv_x : {100.0, 300.0}) {
    const double t = 0.5;
    const ModelSpec s{1.0 / inv_x, 1.0, 1.0 / t, 0.0, 10};
    const double mu = tl_mu_eff(t, inv_x);
    const double n1 = engineered_distribution(s, mu)[0];
    CHECK(n1 == Approx(tl_ground_occupation(t, inv_x)).epsilon(0.01));
  }
  // Finite-size energy solve approaches the closed-form n_1 as x shrinks.
  double prev_err = 1.0;
  for (double inv_x : {20.0, 80.0, 320.0}) {
    const double x = 1.0 / inv_x;
    const ModelSpec s{x, 1.0, 3.0, 0.0, default_cutoff(x)};
    const double n1 = solve_mu_for_energy(s).occupations[0];
    const double err = std::abs(n1 / tl_ground_occupation(1.0 / 3.0, inv_x) - 1.0);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 0.05);
}

TEST_CASE("condensation curves") {
  const std::vector<double> grid = {0.3, 0.5, 0.8, 1.0, 1.2, 2.0};
  const ModelSpec s{0.03, 1.0, 1.0, 0.0, 10};
  const auto one = condensation_curve(s, grid, 1);
  const auto two = condensation_curve(s, grid, 2);
  REQUIRE(one.points.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(one.points[i].fraction_energy_constrained == two.points[i].fraction_energy_constrained);
    CHECK(one.points[i].mu_fixed_n == two.points[i].mu_fixed_n);
  }
  CHECK(one.k_max >= condensation_cutoff(s, grid));
  // At T_low = T both branches reproduce the thermal state.
  const auto& eq = one.points[3];
  const double thermal_fraction = condensate_fraction(
      thermal_occupations(ModelSpec{0.03, 1.0, 1.0, 0.0, one.k_max}));
  CHECK(eq.fraction_energy_constrained == Approx(thermal_fraction).epsilon(1e-8));
  CHECK(eq.fraction_fixed_n == Approx(thermal_fraction).epsilon(1e-8));
  CHECK(std::abs(eq.mu_fixed_n) < 1e-8);

  const auto cmp = equilibrium_comparison(s, grid);
  CHECK(cmp.points[2].fraction_fixed_n == one.points[2].fraction_fixed_n);

  // Fraction grows as x shrinks at fixed T_low/T < 1.
  double prev = 0.0;
  for (double x : {0.1, 0.03, 0.012, 0.006}) {
    const auto c = condensation_curve(ModelSpec{x, 1.0, 1.0, 0.0, 10}, {0.5});
    CHECK(c.points[0].fraction_energy_constrained > prev);
    prev = c.points[0].fraction_energy_constrained;
  }

  const auto g = default_t_ratio_grid();
  CHECK(g.size() == 200u);
  CHECK(g.front() == Approx(0.05));
  CHECK(g.back() == Approx(2.0));
}
