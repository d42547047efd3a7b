#include <benchmark/benchmark.h>

#include "wavefield/green.hpp"

namespace {

wavefield::EvalContext bench_context(wavefield::Execution exec) {
  using namespace wavefield;
  EvalContext ctx;
  ctx.m = 1.0;
  ctx.cfg.g = 1.0;
  ctx.cfg.B = 0.8;
  ProfileParams p;
  p.amplitude = 0.5;
  p.frequency = 1.2;
  ctx.cfg.profile = make_profile(ProfileKind::circular, p);
  ctx.x_a = LorentzVector(0.1, -0.2, 0.0, 0.0);
  ctx.x_b = LorentzVector(0.7, 0.4, 0.3, -0.5);
  ctx.pL = LorentzVector(0.0, 0.0, 0.5, 1.8);
  ctx.quad.execution = exec;
  return ctx;
}

void BM_gf_serial(benchmark::State& state) {
  const auto ctx = bench_context(wavefield::Execution::serial);
  for (auto _ : state) benchmark::DoNotOptimize(wavefield::gf_fixed_pL(ctx).matrix);
}

void BM_gf_parallel(benchmark::State& state) {
  const auto ctx = bench_context(wavefield::Execution::parallel);
  for (auto _ : state) benchmark::DoNotOptimize(wavefield::gf_fixed_pL(ctx).matrix);
}

void BM_gf_k_zero(benchmark::State& state) {
  const auto ctx = bench_context(wavefield::Execution::parallel);
  for (auto _ : state) benchmark::DoNotOptimize(wavefield::gf_k_zero(ctx).matrix);
}

}  // namespace

BENCHMARK(BM_gf_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gf_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gf_k_zero)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
