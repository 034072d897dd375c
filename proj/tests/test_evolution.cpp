#include "doctest.h"
#include "test_helpers.hpp"

using namespace pvmhd;
using namespace pvmhd::testing;

namespace {
double rate_norm(const Rates& r) {
  return std::max({inf_norm(r.dphi), inf_norm(r.dv.x), inf_norm(r.dv.y), inf_norm(r.dh.x), inf_norm(r.dh.y)});
}

FlowState perturbed(Stepper& st, int M, double eps, double h) {
  CircularBackground bg;
  bg.V = 1.0;
  bg.h = h;
  const Vec th = ReferenceFrame(M, 2.0).thetas();
  const Vec phi = eps * cos_mode(th, 3) + 0.5 * eps * cos_mode(th, 2, 0.3);
  FlowState s = rotating_state(M, st.params().nr, phi, bg);
  GridPtr d = st.plasma_grid(phi);
  s.v.x += eps * d->evaluate([](double x, double y) { return 2.0 * x * y; });
  s.v.y += eps * d->evaluate([](double x, double y) { return x * x - y * y; });
  return st.project(s);
}
}  // namespace

TEST_SUITE("mhd-evolution") {
  TEST_CASE("rotating circles are fixed points for every forcing combination") {
    for (int bits = 0; bits < 8; ++bits) {
      CircularBackground bg;
      bg.V = 1.0;
      bg.h = (bits >> 1) & 1;
      EvolutionParams p;
      p.nr = 16;
      p.nr_vac = 16;
      p.alpha = bits & 1;
      p.wall.J0 = (bits >> 2) & 1;
      Stepper st(p);
      CHECK(rate_norm(st.rhs(rotating_state(16, 16, Vec::Zero(32), bg))) < 1e-9);
    }
  }

  TEST_CASE("eigenmode grows at the linear rate and drifts at k Re c") {
    CircularBackground bg;
    bg.V = 1.0;
    EvolutionParams p;
    Stepper st(p);
    cplx c;
    FlowState s = eigenmode_seed(32, p.nr, bg, 4, 1e-6, &c);
    const cplx a0 = fourier_coeffs(s.phi)(4);
    for (int i = 0; i < 20; ++i) s = st.step(s, 0.01);
    const cplx a1 = fourier_coeffs(s.phi)(4);
    CHECK(std::log(std::abs(a1) / std::abs(a0)) / 0.2 == doctest::Approx(std::sqrt(3.0)).epsilon(1e-3));
    CHECK(-std::arg(a1 / a0) / 0.2 == doctest::Approx(4.0 * c.real()).epsilon(1e-3));
  }

  TEST_CASE("steps keep fields divergence free") {
    EvolutionParams p;
    p.nr = 16;
    Stepper st(p);
    FlowState s = perturbed(st, 16, 0.02, 0.8);
    for (int i = 0; i < 5; ++i) s = st.step(s, 0.01);
    GridPtr d = st.plasma_grid(s.phi);
    CHECK(inf_norm(d->divergence(s.h)) < 1e-6);
    CHECK(inf_norm(d->divergence(s.v)) < 1e-6);
    CHECK(st.steps_taken() == 5);
  }

  TEST_CASE("stepping is deterministic") {
    EvolutionParams p;
    p.nr = 12;
    Stepper a(p), b(p);
    FlowState s = perturbed(a, 16, 0.02, 0.5);
    FlowState x = s, y = s;
    for (int i = 0; i < 3; ++i) {
      x = a.step(x, 0.01);
      y = b.step(y, 0.01);
    }
    CHECK((x.phi - y.phi).cwiseAbs().maxCoeff() == 0.0);
    CHECK((x.v.x - y.v.x).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("large interfaces break down with the last state attached") {
    EvolutionParams p;
    p.nr = 12;
    Stepper st(p);
    CircularBackground bg;
    bg.V = 1.0;
    const Vec th = ReferenceFrame(16, 2.0).thetas();
    FlowState s = rotating_state(16, 12, Vec(0.01 * cos_mode(th, 6)), bg);
    try {
      st.step(s, 0.01);
      FAIL("expected a breakdown");
    } catch (const BreakdownError& e) {
      CHECK(e.state().phi.size() == 32);
    }
  }

  TEST_CASE("resolution mismatch is reported") {
    EvolutionParams p;
    p.nr = 12;
    Stepper st(p);
    CircularBackground bg;
    bg.V = 1.0;
    CHECK_THROWS_AS(st.rhs(rotating_state(16, 16, Vec::Zero(32), bg)), Error);
  }

  TEST_CASE("stable time step respects the capillary limit") {
    EvolutionParams p;
    p.alpha = 4.0;
    Stepper st(p);
    CircularBackground bg;
    bg.V = 0.1;
    FlowState s = rotating_state(32, p.nr, Vec::Zero(64), bg);
    const double dth = kPi / 32;
    CHECK(st.stable_dt(s) <= 2.0 * p.cfl * std::pow(dth, 1.5) / 2.0 + 1e-15);
  }

  TEST_CASE("Elsasser vorticities are transported") {
    EvolutionParams p;
    Stepper st(p);
    FlowState s0 = perturbed(st, 32, 0.02, 0.8);
    FlowState s1 = st.step(s0, 1e-3), s2 = st.step(s1, 1e-3);
    CHECK(elsasser_transport_check(st, s0, s1, s2).relative() < 1e-3);
  }

  TEST_CASE("curvature identity on stationary and perturbed states") {
    EvolutionParams p;
    p.alpha = 0.5;
    p.wall.J0 = 0.5;
    Stepper st(p);
    CircularBackground bg;
    bg.V = 1.0;
    bg.h = 0.7;
    CurvatureIdentityReport r = curvature_identity(st, rotating_state(32, p.nr, Vec::Zero(64), bg));
    CHECK(r.residual < 1e-6);
    // The printed remainder leaves an O(1) mismatch on circles with V != h.
    CHECK(r.printed_residual > 1e-2);
    FlowState s = perturbed(st, 32, 0.02, 0.6);
    std::vector<FlowState> states{s};
    for (int i = 0; i < 4; ++i) states.push_back(st.step(states.back(), 1e-3));
    CurvatureIdentityReport q = curvature_identity_residual(st, states);
    CHECK(q.residual < 1e-5);
    CHECK(q.fd_residual < 1e-5);
  }

  TEST_CASE("curvature rate of a circle under uniform expansion") {
    // v = c (x, y): D_t kappa = -c kappa on the unit circle.
    const Vec th = ReferenceFrame(16, 2.0).thetas();
    CurveGeometry g = evaluate_geometry(Vec::Zero(32));
    const Vec k = curvature_rate(g, Vec(0.3 * th.array().cos()), Vec(0.3 * th.array().sin()));
    CHECK(inf_norm(Vec(k.array() + 0.3)) < 1e-12);
  }

  TEST_CASE("flow-map tracker: identity map norms and seed amplitude") {
    FlowMapTracker t = FlowMapTracker::lattice(0.9, 21);
    CHECK(t.size() > 0);
    const auto n = t.sobolev_norms();
    CHECK(n[0] > 0.0);
    CHECK(n[3] >= n[2]);
    CircularBackground bg;
    bg.V = 2.0;
    CHECK(flow_map_seed_amplitude(bg, 16, 0.01) == doctest::Approx(0.02 * std::exp(-2.0)));
    CHECK_THROWS_AS(flow_map_seed(16, 12, bg, 0, 0.01), InvalidWavenumberError);
  }
}
