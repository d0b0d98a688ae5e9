#include <benchmark/benchmark.h>

#include "random_cases.hpp"
#include "sweep.hpp"

using namespace onsager;
using namespace onsager::cli;

namespace {

struct Fixture {
  ReversibleChain chain;
  MobilityModel model;
  SimplexPoint point;
};

Fixture make(int n, std::uint64_t seed = 99) {
  Rng rng(seed);
  ReversibleChain c = random_chain(n, rng);
  VertexField p = random_point(n, rng);
  return {c, MobilityModel::kl(), SimplexPoint(p)};
}

void BM_ThetaJet(benchmark::State& st) {
  const Fixture f = make(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(theta_jet(f.model, f.chain, f.point));
}
BENCHMARK(BM_ThetaJet)->Arg(4)->Arg(16)->Arg(64);

void BM_LocalGeometry(benchmark::State& st) {
  const Fixture f = make(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    LocalGeometry g(f.chain, f.model, f.point);
    benchmark::DoNotOptimize(g.R().data());
  }
}
BENCHMARK(BM_LocalGeometry)->Arg(4)->Arg(16)->Arg(64);

void BM_FrameRiemann(benchmark::State& st) {
  const Fixture f = make(static_cast<int>(st.range(0)));
  const LocalGeometry g(f.chain, f.model, f.point);
  for (auto _ : st) benchmark::DoNotOptimize(frame_riemann(g).max_abs());
}
BENCHMARK(BM_FrameRiemann)->Arg(3)->Arg(5)->Arg(8);

void BM_ChartOracle(benchmark::State& st) {
  const Fixture f = make(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(chart_curvature_oracle(f.chain, f.model, f.point).values.data());
}
BENCHMARK(BM_ChartOracle)->Arg(3)->Arg(5);

void BM_GeodesicBvp(benchmark::State& st) {
  const ReversibleChain c = preset_chain("triangle-reaction");
  const MobilityModel m = MobilityModel::kl();
  VertexField a(3), b(3);
  a << 0.5, 0.3, 0.2;
  b << 0.3, 0.3, 0.4;
  const SimplexPoint p0(a), p1(b);
  for (auto _ : st) benchmark::DoNotOptimize(geodesic_bvp(c, m, p0, p1).length);
}
BENCHMARK(BM_GeodesicBvp)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& st) {
  const ReversibleChain lat = preset_chain("lattice3");
  const MobilityModel m = MobilityModel::geometric(1.0);
  const int R = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(run_sweep(lat, m, R, 1).size());
  st.SetItemsProcessed(st.iterations() * R * R);
}
BENCHMARK(BM_Sweep)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
