#include <benchmark/benchmark.h>

#include <algorithm>

#include "sedlab/dynamics.hpp"
#include "sedlab/vacuum_field.hpp"
#include "sedlab/walker.hpp"
#include "sedlab/whichpath.hpp"

using namespace sedlab;

static void BM_FieldDirect(benchmark::State& state) {
  FieldSpec f;
  f.n_modes = static_cast<std::size_t>(state.range(0));
  const auto t = synthesize_modes(f);
  double time = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(field_at(t, time));
    time += 0.05;
  }
}
BENCHMARK(BM_FieldDirect)->Arg(300)->Arg(600);

static void BM_FieldPhasor(benchmark::State& state) {
  FieldSpec f;
  f.n_modes = static_cast<std::size_t>(state.range(0));
  const auto t = synthesize_modes(f);
  FieldStepper st(t, 0.0, 0.05);
  for (auto _ : state) {
    st.advance();
    benchmark::DoNotOptimize(st.value());
  }
}
BENCHMARK(BM_FieldPhasor)->Arg(300)->Arg(600);

static void BM_IntegratorStep(benchmark::State& state) {
  FieldSpec f;
  f.n_modes = std::max<std::size_t>(1, static_cast<std::size_t>(state.range(0)));
  const auto t = synthesize_modes(f);
  OscillatorIntegrator it(OscillatorParams::from(f), state.range(0) > 0 ? &t : nullptr, std::nullopt,
                          {0.0, 0.0}, 0.0, 0.1);
  for (auto _ : state) {
    it.step();
    benchmark::DoNotOptimize(it.state());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_IntegratorStep)->Arg(0)->Arg(300)->Arg(600);

static void BM_FringeQuadrature(benchmark::State& state) {
  const WhichPathModel m{1.5, 3.0};
  double xi = -10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fringe_quadrature(m, xi));
    xi = xi > 10.0 ? -10.0 : xi + 0.37;
  }
}
BENCHMARK(BM_FringeQuadrature);

static void BM_ExitAngle(benchmark::State& state) {
  SlitGeometry g;
  const auto walkers = synthesize_walkers(g, lobed_single_slit_law(g), 1000, 0.0, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(exit_angle(walkers[i], g));
    i = (i + 1) % walkers.size();
  }
}
BENCHMARK(BM_ExitAngle);

BENCHMARK_MAIN();
