#include <cmath>

#include "doctest.h"
#include "pfr/circuit.hpp"
#include "pfr/config.hpp"
#include "pfr/constants.hpp"
#include "pfr/model.hpp"

using doctest::Approx;
using namespace pfr;

namespace {

CircuitParams table1() { return load_preset("table1").circuit_params(); }

const FeasibilityCheck& find(const FeasibilityReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no check " + name);
}

}  // namespace

TEST_CASE("zero-point phases") {
  const CircuitParams p = table1();
  const PhaseZpf z = phase_zpf(p);
  CHECK(z.waveguide == Approx(0.068182512719660260).epsilon(1e-8));
  CHECK(z.waste == Approx(1.7090821421848824).epsilon(1e-8));
  for (int k : {1, 2, 5, 40}) {
    CHECK(phase_zpf_mode(p, k) == Approx(z.waveguide / std::sqrt(k)).epsilon(1e-14));
  }
}

TEST_CASE("coupling strength and dissipation ratio") {
  CircuitParams p = table1();
  const double g = coupling_strength(p);
  const PhaseZpf z = phase_zpf(p);
  CHECK(g == Approx(0.4 * p.josephson_angular() * z.waste * z.waveguide * z.waveguide / 162.0)
                 .epsilon(1e-14));
  CHECK(g / si::mhz_to_angular == Approx(0.5885).epsilon(2e-3));
  const double big_g = circuit_big_g(p);
  CHECK(big_g > 1.8e-5 / 2);
  CHECK(big_g < 1.8e-5 * 2);
  CHECK(dimensionless_from_physical(circuit_physical_inputs(p)).big_g ==
        Approx(big_g).epsilon(1e-12));

  CircuitParams d = p;
  d.snail_count = 6;
  CHECK(coupling_strength(d) == Approx(g / 4).epsilon(1e-14));
  d = p;
  d.drive_amplitude = 0.0;
  CHECK(coupling_strength(d) == 0.0);
  CHECK(std::isinf(circuit_big_g(d)));
}

TEST_CASE("frequency shifts") {
  CircuitParams p = table1();
  const auto zero = frequency_shifts(p, 0.0, 0.0);
  CHECK(zero.self_kerr == 0.0);
  CHECK(zero.cross_kerr_waste == 0.0);
  const auto a = frequency_shifts(p, 100.0, 0.1);
  const auto b = frequency_shifts(p, 200.0, 0.2);
  CHECK(b.self_kerr == Approx(2 * a.self_kerr).epsilon(1e-14));
  CHECK(b.cross_kerr_waste == Approx(2 * a.cross_kerr_waste).epsilon(1e-14));
  CHECK(b.lamb == Approx(a.lamb).epsilon(1e-14));
  CHECK(a.total == Approx(a.self_kerr + a.cross_kerr_waveguide + a.cross_kerr_waste + a.lamb));
  const auto k2 = frequency_shifts(p, 100.0, 0.1, 2);
  CHECK(k2.self_kerr == 0.0);
  CHECK(k2.cross_kerr_waveguide == Approx(2 * a.self_kerr).epsilon(1e-12));

  CircuitParams z = p;
  z.drive_amplitude = 0.0;
  CHECK(frequency_shifts(z, 0.0, 0.0).lamb == 0.0);

  // Kerr terms scale as 1/N_c^3, the Lamb shift as 1/N_c.
  for (int nc : {1, 2, 3, 6}) {
    CircuitParams q = p;
    q.snail_count = nc;
    const auto s = frequency_shifts(q, 100.0, 0.1);
    CircuitParams one = p;
    one.snail_count = 1;
    const auto s1 = frequency_shifts(one, 100.0, 0.1);
    CHECK(s.self_kerr * nc * nc * nc == Approx(s1.self_kerr).epsilon(1e-12));
    CHECK(s.lamb * nc == Approx(s1.lamb).epsilon(1e-12));
    CHECK(coupling_strength(q) * nc * nc == Approx(coupling_strength(one)).epsilon(1e-12));
  }
}

TEST_CASE("resonance choice") {
  CHECK(resonance_choice(0) == std::pair<double, double>(1.25, 0.25));
  CHECK(resonance_choice(4) == std::pair<double, double>(3.25, 2.25));
  for (int n = 0; n <= 20; ++n) {
    const auto [w, d] = resonance_choice(n);
    CHECK(w - d == 1.0);
    for (double combo : {2 * w + d, 2 * w - d}) {
      CHECK(std::abs(combo - std::round(combo)) > 0.1);
    }
  }
}

TEST_CASE("detuned rates") {
  const CircuitParams p = table1();
  const double g = coupling_strength(p);
  const double gamma = *p.physical.waste_decay;
  const double ideal = g * g / (gamma * 6.0);
  CHECK(detuned_kappa(2, 0.0, p) == Approx(ideal).epsilon(1e-14));
  CHECK(detuned_kappa(2, gamma, p) == Approx(ideal / 2).epsilon(1e-14));
  CHECK(detuned_kappa(2, 10 * gamma, p) == Approx(ideal / 101).epsilon(1e-14));
}

TEST_CASE("feasibility report") {
  const CircuitParams p = table1();
  const auto rep = validate(p, 1e3, 800.0);
  for (const auto& c : rep.checks) {
    CHECK_FALSE(c.inequality.empty());
    if (!c.skipped) CHECK(c.margin == Approx(c.rhs / c.lhs));
  }
  CHECK(find(rep, "mode_resolution").passed);
  CHECK(find(rep, "dissipation_ratio").passed);
  CHECK(find(rep, "weak_coupling").passed);
  CHECK(find(rep, "capacitive_loss").skipped);
  CHECK_FALSE(find(rep, "capacitive_loss").mandatory);

  CircuitParams off = p;
  off.drive_amplitude = 0.0;
  const auto r0 = validate(off, 1e3, 800.0);
  CHECK_FALSE(find(r0, "dissipation_ratio").passed);
  CHECK(std::isinf(r0.big_g));
  CHECK_FALSE(r0.mandatory_passed());

  CircuitParams broad = p;
  broad.physical.waste_decay = p.physical.mode_spacing;
  const auto& res = find(validate(broad, 1e3, 800.0), "mode_resolution");
  CHECK_FALSE(res.passed);
  CHECK(res.margin == Approx(0.25));

  CircuitParams cap = p;
  cap.capacitance_ratio = 1e-6;
  const auto& cc = find(validate(cap, 1e3, 800.0), "capacitive_loss");
  CHECK_FALSE(cc.skipped);
  CHECK(cc.passed);
}

TEST_CASE("unit rescaling leaves checks invariant") {
  const CircuitParams p = table1();
  CircuitParams q = p;
  q.physical.mode_spacing *= 2;
  q.physical.waste_frequency *= 2;
  q.physical.waste_decay = *q.physical.waste_decay * 2;
  q.physical.support_temperature *= 2;
  q.physical.waste_temperature *= 2;
  q.physical.quality_factor = *q.physical.quality_factor;
  q.josephson_frequency *= 2;
  const auto a = validate(p, 1e3, 800.0);
  const auto b = validate(q, 1e3, 800.0);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].passed == b.checks[i].passed);
    if (!a.checks[i].skipped) CHECK(a.checks[i].margin == Approx(b.checks[i].margin).epsilon(1e-12));
  }
}
