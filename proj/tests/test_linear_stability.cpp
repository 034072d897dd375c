#include "doctest.h"
#include "test_helpers.hpp"

using namespace pvmhd;
using namespace pvmhd::testing;

namespace {
CircularBackground make_bg(double V, double h = 0.0, double alpha = 0.0) {
  CircularBackground bg;
  bg.V = V;
  bg.h = h;
  bg.alpha = alpha;
  return bg;
}
}  // namespace

TEST_SUITE("linear-stability") {
  TEST_CASE("pure rotation grows at sqrt(k - 1)") {
    for (int k = 2; k <= 12; ++k) {
      DispersionResult r = dispersion_roots(k, make_bg(1.0));
      CHECK(r.sigma == doctest::Approx(std::sqrt(k - 1.0)).epsilon(1e-13));
      CHECK(r.cls == StabilityClass::Unstable);
      CHECK(r.residual < 1e-13);
      // Re c = (k - 1) V / k for both roots.
      CHECK(r.c_plus.real() == doctest::Approx((k - 1.0) / k).epsilon(1e-14));
    }
  }

  TEST_CASE("frozen roots with surface tension") {
    // k = 3, alpha = 1: 3 (c - 2/3)^2 = 2 (4 - 1/3), c = 2/3 +- sqrt(22)/3.
    DispersionResult r = dispersion_roots(3, make_bg(1.0, 0.0, 1.0));
    CHECK(r.cls == StabilityClass::Stable);
    CHECK(r.sigma == doctest::Approx(0.0));
    const double hi = std::max(r.c_plus.real(), r.c_minus.real());
    const double lo = std::min(r.c_plus.real(), r.c_minus.real());
    CHECK(hi == doctest::Approx(2.0 / 3.0 + std::sqrt(22.0) / 3.0).epsilon(1e-14));
    CHECK(lo == doctest::Approx(2.0 / 3.0 - std::sqrt(22.0) / 3.0).epsilon(1e-14));
  }

  TEST_CASE("k = 1 and negative k") {
    CHECK(dispersion_roots(1, make_bg(1.0)).sigma == doctest::Approx(0.0));
    CHECK(dispersion_roots(-4, make_bg(1.0)).sigma == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
    CHECK_THROWS_AS(dispersion_roots(0, make_bg(1.0)), InvalidWavenumberError);
  }

  TEST_CASE("threshold h^2 = V^2/k - alpha (k + 1) separates the classes") {
    for (int k = 2; k <= 10; ++k) {
      const double th = stability_threshold(k, 0.0, 1.0);
      CHECK(th == doctest::Approx(1.0 / k));
      CHECK(dispersion_roots(k, make_bg(1.0, std::sqrt(th) * 1.01)).cls == StabilityClass::Stable);
      CHECK(dispersion_roots(k, make_bg(1.0, std::sqrt(th) * 0.99)).cls == StabilityClass::Unstable);
    }
    // Exactly on the threshold: k = 4, h = 1/2.
    CHECK(dispersion_roots(4, make_bg(1.0, 0.5)).cls == StabilityClass::Neutral);
    CHECK(stability_threshold(3, 0.05, 1.0) == doctest::Approx(1.0 / 3.0 - 0.2));
  }

  TEST_CASE("no shear means no instability") {
    for (int k = 2; k <= 20; ++k) CHECK(dispersion_roots(k, make_bg(0.0, 0.3)).sigma == 0.0);
  }

  TEST_CASE("admissible profiles reduce to constants") {
    CircularBackground bg = make_bg(0.0);
    bg.V_profile = [](double) { return 0.7; };
    CHECK(reduce_profiles(bg).V == doctest::Approx(0.7));
    bg.V_profile = [](double r) { return r; };
    CHECK_THROWS_AS(reduce_profiles(bg), UnsupportedProfileError);
  }

  TEST_CASE("mode profile solves z'' = k^2 z") {
    DispersionResult r = dispersion_roots(4, make_bg(1.0));
    ModeProfile m = mode_profile(4, r.c_plus, 1.0);
    CHECK(m.ode_residual < 1e-8);
    CHECK(std::abs(m.z0 - (1.0 - r.c_plus)) < 1e-12);
    CHECK_THROWS_AS(mode_profile(4, cplx(1.0, 0.0), 1.0), DegenerateModeError);
  }

  TEST_CASE("growth-rate curve follows the wavenumber list") {
    auto curve = growth_rate_curve(make_bg(1.0), {2, 5, 10});
    REQUIRE(curve.size() == 3);
    CHECK(curve[1].k == 5);
    CHECK(curve[2].sigma == doctest::Approx(3.0));
  }

  TEST_CASE("wall current is outside the linear model") {
    CircularBackground bg = make_bg(1.0);
    bg.J0 = 1.0;
    CHECK_THROWS_AS(dispersion_roots(3, bg), Error);
  }
}
