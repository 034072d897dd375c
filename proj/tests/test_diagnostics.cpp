#include "doctest.h"
#include "test_helpers.hpp"

using namespace pvmhd;
using namespace pvmhd::testing;

TEST_SUITE("diagnostics-energy") {
  TEST_CASE("physical energy of the rotating circle in closed form") {
    const double V = 1.2, h = 0.5, J = 0.8, alpha = 0.3, R = 2.0;
    CircularBackground bg;
    bg.V = V;
    bg.h = h;
    EvolutionParams p;
    p.alpha = alpha;
    p.wall.J0 = J;
    Stepper st(p);
    PhysicalEnergy e = physical_energy(st, rotating_state(32, p.nr, Vec::Zero(64), bg));
    CHECK(e.kinetic == doctest::Approx(kPi * V * V / 4).epsilon(1e-12));
    CHECK(e.plasma_magnetic == doctest::Approx(kPi * h * h / 4).epsilon(1e-12));
    CHECK(e.vacuum_magnetic == doctest::Approx(kPi * J * J * R * R * std::log(R)).epsilon(1e-10));
    CHECK(e.surface == doctest::Approx(2 * kPi * alpha).epsilon(1e-12));
  }

  TEST_CASE("energy is conserved by a short nonlinear run") {
    CircularBackground bg;
    bg.V = 1.0;
    bg.h = 1.0;
    EvolutionParams p;
    p.alpha = 0.2;
    p.nr = 16;
    Stepper st(p);
    FlowState s = eigenmode_seed(32, p.nr, CircularBackground{1.0, 1.0, 0.2}, 3, 1e-2);
    std::vector<double> t, E;
    for (int i = 0; i <= 20; ++i) {
      if (i) s = st.step(s, 2e-3);
      t.push_back(s.t);
      E.push_back(physical_energy(st, s).total());
    }
    CHECK(conservation_check(t, E).drift_per_time < 1e-6);
  }

  TEST_CASE("wall current ramp: power balance through the electric field") {
    // E_vac = pi J^2 R^2 log R, dE/dt = 2 pi J J' R^2 log R, carried by the wall term.
    const double J0 = 1.0, rate = 0.5, R = 2.0, dt = 1e-3;
    EvolutionParams p;
    p.wall.J0 = J0;
    p.wall.rate = rate;
    Stepper st(p);
    CircularBackground bg;
    bg.V = 1.0;
    FlowState s0 = rotating_state(16, p.nr, Vec::Zero(32), bg);
    FlowState s1 = st.step(s0, dt), s2 = st.step(s1, dt);
    ElectricField ef = electric_field(st, s0, s1, s2);
    const double J = J0 + rate * s1.t;
    CHECK(ef.wall_power == doctest::Approx(2 * kPi * J * rate * R * R * std::log(R)).epsilon(1e-8));
    CHECK(ef.residual < 1e-6);
    const double dE = (physical_energy(st, s2).total() - physical_energy(st, s0).total()) / (2 * dt);
    CHECK(dE == doctest::Approx(ef.wall_power).epsilon(1e-6));
  }

  TEST_CASE("conservation check reports drift and flux mismatch") {
    std::vector<double> t{0, 1, 2}, E{1.0, 1.1, 1.2}, flux{0.1, 0.1, 0.1};
    DriftReport d = conservation_check(t, E, &flux);
    CHECK(d.max_relative_drift == doctest::Approx(0.2));
    CHECK(d.drift_per_time == doctest::Approx(0.1));
    CHECK(d.max_flux_mismatch < 1e-12);
    CHECK_THROWS_AS(conservation_check({0.0}, {1.0}), Error);
  }

  TEST_CASE("stability monitors classify the three regimes") {
    CircularBackground bg;
    bg.V = 1.0;
    EvolutionParams p;
    p.nr = 16;
    {
      Stepper st(p);
      bg.h = 1.0;
      StabilityMonitors m = stability_monitors(st, rotating_state(16, 16, Vec::Zero(32), bg));
      CHECK(m.regime == Regime::NonDegenerate);
      CHECK(m.min_field == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(m.min_minus_dnq == doctest::Approx(0.0).epsilon(1e-9));
    }
    {
      p.alpha = 0.5;
      Stepper st(p);
      bg.h = 0.0;
      CHECK(stability_monitors(st, rotating_state(16, 16, Vec::Zero(32), bg)).regime == Regime::SurfaceTension);
    }
    {
      p.alpha = 0.0;
      Stepper st(p);
      FlowState s = strain_seed(16, 16, 0.02, 0.05, 3, 0.0);
      StabilityMonitors m = stability_monitors(st, s);
      // -dn q = beta^2 - V^2 on the circle.
      CHECK(m.min_minus_dnq == doctest::Approx(0.05 * 0.05 - 0.02 * 0.02).epsilon(1e-6));
      CHECK(m.regime == Regime::SignCondition);
    }
    {
      Stepper st(p);
      bg.h = 0.0;
      CHECK(stability_monitors(st, rotating_state(16, 16, Vec::Zero(32), bg)).regime == Regime::None);
    }
  }

  TEST_CASE("higher energies are finite and nonnegative") {
    EvolutionParams p;
    p.alpha = 0.1;
    p.nr = 16;
    Stepper st(p);
    FlowState s = eigenmode_seed(16, 16, CircularBackground{1.0, 0.8, 0.1}, 3, 1e-3);
    for (int m : {0, 1, 2}) {
      HigherEnergy e = higher_energy(st, s, m);
      CHECK(std::isfinite(e.E_total));
      CHECK(e.E_int >= 0.0);
      CHECK(e.M >= 0.0);
    }
    CHECK_THROWS_AS(higher_energy(st, s, -1), Error);
  }

  TEST_CASE("interior Sobolev norm of a constant") {
    GridPtr disk = MappedDomainGrid::plasma(Vec::Zero(16), 12);
    CHECK(interior_sobolev_sq(*disk, disk->constant(2.0), 2) == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  }
}
