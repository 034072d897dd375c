#include "doctest.h"
#include "pvmhd/kernels.hpp"
#include "test_helpers.hpp"

using namespace pvmhd;
using namespace pvmhd::testing;

TEST_SUITE("kernels") {
  TEST_CASE("serial and OpenMP right-hand sides are bitwise identical") {
    CircularBackground bg;
    bg.V = 1.0;
    bg.h = 0.7;
    FlowState s = eigenmode_seed(32, 16, bg, 3, 1e-2);
    GridPtr disk = MappedDomainGrid::plasma(s.phi, 16);
    Gradients gv = gradients(*disk, s.v), gh = gradients(*disk, s.h);
    VectorField W = disk->extend_radial_motion(Vec(0.1 * s.phi));
    VectorField gp = disk->gradient(disk->evaluate([](double x, double y) { return x * x * y; }));
    VectorField a = momentum_rhs(s.v, W, s.h, gv, gh, gp, Exec::Serial);
    VectorField b = momentum_rhs(s.v, W, s.h, gv, gh, gp, Exec::Parallel);
    CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);
    VectorField c = induction_rhs(s.v, W, s.h, gv, gh, Exec::Serial);
    VectorField d = induction_rhs(s.v, W, s.h, gv, gh, Exec::Parallel);
    CHECK((c.x - d.x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((c.y - d.y).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("momentum kernel on a rigid rotation") {
    // -(v.grad) v = V^2 (x, y) for v = V(-y, x).
    GridPtr disk = MappedDomainGrid::plasma(Vec::Zero(16), 12);
    const double V = 1.5;
    VectorField v{Field(-V * disk->Y()), Field(V * disk->X())};
    VectorField zero{disk->zeros(), disk->zeros()};
    Gradients gv = gradients(*disk, v), g0 = gradients(*disk, zero);
    VectorField r = momentum_rhs(v, zero, zero, gv, g0, zero, Exec::Serial);
    CHECK(inf_norm(Field(r.x - V * V * disk->X())) < 1e-11);
    CHECK(inf_norm(Field(r.y - V * V * disk->Y())) < 1e-11);
  }

  TEST_CASE("marker sampling reproduces smooth fields and agrees across paths") {
    ReferenceFrame frame(16, 2.0);
    GridPtr disk = MappedDomainGrid::plasma(Vec(0.05 * cos_mode(frame.thetas(), 2)), 16);
    Field f = disk->evaluate([](double x, double y) { return 1.0 + x * x - 2.0 * x * y + 0.5 * y; });
    Field g = disk->evaluate([](double x, double y) { return std::sin(x) * std::cos(y); });
    std::vector<double> px, py;
    for (int i = 0; i < 50; ++i) {
      const double r = 0.9 * i / 50.0, a = 0.7 * i;
      px.push_back(r * std::cos(a));
      py.push_back(r * std::sin(a));
    }
    MarkerSample s = sample_at_points(*disk, {&f, &g}, px, py, Exec::Serial);
    MarkerSample p = sample_at_points(*disk, {&f, &g}, px, py, Exec::Parallel);
    CHECK(s.values == p.values);
    CHECK(s.misses == 0);
    double err = 0.0;
    for (size_t i = 0; i < px.size(); ++i) {
      const double x = px[i], y = py[i];
      err = std::max(err, std::abs(s.values[2 * i] - (1.0 + x * x - 2.0 * x * y + 0.5 * y)));
      err = std::max(err, std::abs(s.values[2 * i + 1] - std::sin(x) * std::cos(y)));
    }
    CHECK(err < 1e-10);
  }

  TEST_CASE("points outside the disk are counted") {
    GridPtr disk = MappedDomainGrid::plasma(Vec::Zero(16), 12);
    Field f = disk->constant(1.0);
    MarkerSample s = sample_at_points(*disk, {&f}, {1.5, 0.0}, {0.0, 0.2});
    CHECK(s.misses == 1);
  }
}
