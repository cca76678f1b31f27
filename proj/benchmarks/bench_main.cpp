#include <benchmark/benchmark.h>

#include "endgate/chain.hpp"
#include "endgate/propagator.hpp"
#include "endgate/protocol.hpp"
#include "endgate/switched.hpp"

using namespace endgate;

namespace {

ChainSpec xy_spec(int n) {
  ChainSpec s;
  s.n_sites = n;
  return s;
}

void BM_Diagonalize(benchmark::State& state) {
  const SectorHamiltonian h = build_xy(xy_spec(static_cast<int>(state.range(0))), false);
  for (auto _ : state) {
    auto p = SpectralPropagator::diagonalize(h);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_Diagonalize)->Arg(23)->Arg(100)->Arg(400);

void BM_Evolve(benchmark::State& state) {
  const SpectralPropagator p = SpectralPropagator::diagonalize(
      build_xy(xy_spec(static_cast<int>(state.range(0))), false));
  SectorState psi = basis_state(p.dimension(), 1);
  double t = 0.1;
  for (auto _ : state) {
    psi = p.evolve(psi, t);
    t += 0.1;
    benchmark::DoNotOptimize(psi);
  }
}
BENCHMARK(BM_Evolve)->Arg(23)->Arg(100)->Arg(400);

void BM_AmplitudeScan2048(benchmark::State& state) {
  const SpectralPropagator p = SpectralPropagator::diagonalize(
      build_xy(xy_spec(static_cast<int>(state.range(0))), false));
  const SectorState psi = basis_state(p.dimension(), 1);
  std::vector<double> ts(2048);
  for (int i = 0; i < 2048; ++i) ts[static_cast<std::size_t>(i)] = 80.0 * (i + 1) / 2048.0;
  for (auto _ : state) {
    auto scan = p.amplitude_scan(p.end_index(), psi, ts);
    benchmark::DoNotOptimize(scan);
  }
}
BENCHMARK(BM_AmplitudeScan2048)->Arg(20)->Arg(100);

void BM_Protocol100Gates(benchmark::State& state) {
  const SpectralPropagator p = SpectralPropagator::diagonalize(build_xy(xy_spec(20), false));
  const std::vector<double> intervals(100, 10.27);
  for (auto _ : state) {
    auto trace = run_protocol(p, intervals);
    benchmark::DoNotOptimize(trace);
  }
}
BENCHMARK(BM_Protocol100Gates);

void BM_GreedyCycleSearch(benchmark::State& state) {
  const ChainSpec spec = xy_spec(20);
  const GreedyParams params = GreedyParams::defaults_for(spec);
  const SpectralPropagator frozen = SpectralPropagator::diagonalize(
      build_switched(spec, SwitchMode{SwitchKind::Coupling, 0.0}, false));
  const SectorState one = basis_state(22, 1);
  for (auto _ : state) {
    auto peak = find_next_peak(one, frozen, params);
    benchmark::DoNotOptimize(peak);
  }
}
BENCHMARK(BM_GreedyCycleSearch);

}  // namespace

BENCHMARK_MAIN();
