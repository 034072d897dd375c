// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "pvmhd/evolution.hpp"
#include "pvmhd/kernels.hpp"

using namespace pvmhd;

namespace {

struct Setup {
  GridPtr disk;
  FlowState s;
  Gradients gv, gh;
  VectorField W, gp;
  FlowMapTracker markers;

  explicit Setup(int n_modes) {
    CircularBackground bg;
    bg.V = 1.0;
    bg.h = 0.5;
    s = eigenmode_seed(n_modes, 24, bg, 4, 1e-3);
    disk = MappedDomainGrid::plasma(s.phi, 24);
    gv = gradients(*disk, s.v);
    gh = gradients(*disk, s.h);
    W = {disk->zeros(), disk->zeros()};
    gp = disk->gradient(disk->evaluate([](double x, double y) { return x * y; }));
    markers = FlowMapTracker::lattice(0.9, 41);
  }
};

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_Momentum(benchmark::State& st) {
  Setup su(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(momentum_rhs(su.s.v, su.W, su.s.h, su.gv, su.gh, su.gp, exec_of(st)));
}

void BM_Induction(benchmark::State& st) {
  Setup su(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(induction_rhs(su.s.v, su.W, su.s.h, su.gv, su.gh, exec_of(st)));
}

void BM_MarkerSampling(benchmark::State& st) {
  Setup su(static_cast<int>(st.range(0)));
  std::vector<const Field*> f{&su.s.v.x, &su.s.v.y};
  for (auto _ : st)
    benchmark::DoNotOptimize(sample_at_points(*su.disk, f, su.markers.x, su.markers.y, exec_of(st)));
}

}  // namespace

// Second argument: 0 serial, 1 OpenMP.
BENCHMARK(BM_Momentum)->ArgsProduct({{32, 128}, {0, 1}});
BENCHMARK(BM_Induction)->ArgsProduct({{32, 128}, {0, 1}});
BENCHMARK(BM_MarkerSampling)->ArgsProduct({{32, 64}, {0, 1}});

BENCHMARK_MAIN();
