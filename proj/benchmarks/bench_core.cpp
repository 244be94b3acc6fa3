#include <benchmark/benchmark.h>

#include "prudent/fourier.hpp"
#include "prudent/laces.hpp"
#include "prudent/montecarlo.hpp"
#include "prudent/series.hpp"

using namespace prudent;

static void BM_EnumeratePrudent2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  EnumerationOptions opts;
  opts.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(build_coeff_table(n, 2, 1, opts));
}
BENCHMARK(BM_EnumeratePrudent2D)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_EnumerateWeighted3D(benchmark::State& state) {
  EnumerationOptions opts;
  opts.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(build_coeff_table(static_cast<int>(state.range(0)), 3, Rational(1, 2), opts));
}
BENCHMARK(BM_EnumerateWeighted3D)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_PiDirect(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  EnumerationOptions opts;
  opts.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(pi_table_direct(n, n, 2, Rational(1, 2), opts));
}
BENCHMARK(BM_PiDirect)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_PiInversion(benchmark::State& state) {
  const auto t = build_coeff_table(static_cast<int>(state.range(0)), 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(pi_table_via_inversion(t));
}
BENCHMARK(BM_PiInversion)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_Bubble(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto t = build_coeff_table(6, d, 1);
  const SeriesQuery q(t, 0.4 / d);
  for (auto _ : state) benchmark::DoNotOptimize(bubble_truncated(q));
}
BENCHMARK(BM_Bubble)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_BubbleExact(benchmark::State& state) {
  const auto t = build_coeff_table(8, 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(bubble_truncated_exact(t, Rational(1, 10), 8));
}
BENCHMARK(BM_BubbleExact)->Unit(benchmark::kMillisecond);

static void BM_GHatGrid(benchmark::State& state) {
  const auto t = build_coeff_table(8, 3, 1);
  const SeriesQuery q(t, 0.1);
  const FourierGrid grid(3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(g_hat_grid(q, grid));
}
BENCHMARK(BM_GHatGrid)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_AxisMass(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(axis_mass_sequence(static_cast<int>(state.range(0)), 5));
}
BENCHMARK(BM_AxisMass)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_Rosenbluth(benchmark::State& state) {
  const SamplerConfig cfg{3, 0.2, static_cast<int>(state.range(0)), 10000, 1, 1};
  for (auto _ : state) benchmark::DoNotOptimize(rosenbluth_estimate(cfg));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Rosenbluth)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
