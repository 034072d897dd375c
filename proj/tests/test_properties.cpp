// Randomized properties over generated interfaces and data. Each case draws a
// fixed number of samples from a seeded generator.
#include "doctest.h"
#include "test_helpers.hpp"

using namespace pvmhd;
using namespace pvmhd::testing;

TEST_SUITE("properties") {
  TEST_CASE("ancillary curvature inverts on random Lambda-ball heights") {
    std::mt19937_64 rng(11);
    ReferenceFrame frame(24, 2.0);
    for (int i = 0; i < 25; ++i) {
      HeightField phi = HeightField::from_nodes(random_height(rng, 24, 8, 0.9));
      HeightField back = invert_ancillary_curvature(ancillary_curvature(evaluate_geometry(frame, phi), phi), frame);
      CHECK(inf_norm(Vec(back.nodes() - phi.nodes())) < 1e-10);
    }
  }

  TEST_CASE("DN operator is self-adjoint and nonnegative on smooth data") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 6; ++i) {
      GridPtr disk = MappedDomainGrid::plasma(random_height(rng, 16, 5, 0.5), 16);
      const Vec& th = disk->interface().theta;
      const Vec& w = disk->interface().weights;
      const Vec f = random_trig(rng, th, 5), g = random_trig(rng, th, 5);
      const Vec Nf = apply_dn(*disk, f), Ng = apply_dn(*disk, g);
      CHECK(std::abs(w.dot(Nf.cwiseProduct(g)) - w.dot(f.cwiseProduct(Ng))) < 1e-10 * (1.0 + Nf.norm() * g.norm()));
      CHECK(w.dot(Nf.cwiseProduct(f)) > -1e-10);
      CHECK(inf_norm(apply_dn(*disk, Vec::Ones(th.size()))) < 1e-10);
    }
  }

  TEST_CASE("DN Leibniz correction holds on random curves") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 6; ++i) {
      GridPtr disk = MappedDomainGrid::plasma(random_height(rng, 16, 5, 0.5), 20);
      const Vec& th = disk->interface().theta;
      LeibnizReport r = leibniz_correction_check(*disk, random_trig(rng, th, 3), random_trig(rng, th, 3));
      CHECK(r.residual < 1e-6 * std::max(1.0, r.scale));
    }
  }

  TEST_CASE("velocity recovery reproduces its curl and flux data") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 5; ++i) {
      GridPtr disk = MappedDomainGrid::plasma(random_height(rng, 16, 4, 0.3), 20);
      const double a = u(rng), b = u(rng), c = u(rng);
      Field omega = disk->evaluate([&](double x, double y) { return a + b * x + c * x * y; });
      const Vec dphi = 0.1 * random_trig(rng, disk->interface().theta, 3);
      VelocityRecovery r = recover_velocity(*disk, dphi, omega);
      CHECK(inf_norm(Field(disk->curl(r.v) - omega)) < 1e-7);
      CHECK(inf_norm(Field(disk->divergence(r.v).array() - r.gamma)) < 1e-7);
    }
  }

  TEST_CASE("rigid rotation of the interface commutes with the DN map") {
    // Rotating by one node index shifts node data.
    std::mt19937_64 rng(15);
    const Vec phi = random_height(rng, 16, 4, 0.4);
    Vec rot(phi.size());
    for (int j = 0; j < phi.size(); ++j) rot((j + 1) % phi.size()) = phi(j);
    GridPtr d0 = MappedDomainGrid::plasma(phi, 16), d1 = MappedDomainGrid::plasma(rot, 16);
    const Vec f = random_trig(rng, d0->interface().theta, 4);
    Vec fr(f.size());
    for (int j = 0; j < f.size(); ++j) fr((j + 1) % f.size()) = f(j);
    const Vec a = apply_dn(*d0, f), b = apply_dn(*d1, fr);
    double err = 0.0;
    for (int j = 0; j < f.size(); ++j) err = std::max(err, std::abs(b((j + 1) % f.size()) - a(j)));
    CHECK(err < 1e-10);
  }

  TEST_CASE("growth rate is monotone in k for pure rotation and decreasing in h") {
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int i = 0; i < 50; ++i) {
      CircularBackground bg;
      bg.V = u(rng);
      double prev = 0.0;
      for (int k = 2; k <= 12; ++k) {
        const double s = dispersion_roots(k, bg).sigma;
        CHECK(s >= prev);
        prev = s;
      }
      CircularBackground hb = bg;
      hb.h = 0.3 * bg.V;
      CHECK(dispersion_roots(5, hb).sigma <= dispersion_roots(5, bg).sigma);
    }
  }

  TEST_CASE("rotating states of random backgrounds are stationary") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.5);
    for (int i = 0; i < 4; ++i) {
      CircularBackground bg;
      bg.V = u(rng);
      bg.h = u(rng);
      EvolutionParams p;
      p.nr = 12;
      p.nr_vac = 16;
      p.alpha = u(rng);
      p.wall.J0 = u(rng);
      Stepper st(p);
      Rates r = st.rhs(rotating_state(16, 12, Vec::Zero(32), bg));
      CHECK(inf_norm(r.dphi) < 1e-9);
      CHECK(inf_norm(r.dv.x) < 1e-9);
    }
  }
}
