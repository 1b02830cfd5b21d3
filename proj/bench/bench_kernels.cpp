// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "deadend/cayley.hpp"
#include "deadend/depth.hpp"

using namespace deadend;

namespace {

GeneratingSet lamplighter_gens() {
  const Group g = Group::lamplighter();
  return GeneratingSet::parse(g, "t,a");
}

GeneratingSet grid_gens() {
  const Group g = Group::integer_grid(3);
  return GeneratingSet::parse(g, "[1,0,0],[0,1,0],[0,0,1]");
}

void BM_BallSerial(benchmark::State& state, GeneratingSet (*gens)()) {
  const auto S = gens();
  const auto r = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_ball_serial(S, r).size());
}

void BM_BallParallel(benchmark::State& state, GeneratingSet (*gens)()) {
  const auto S = gens();
  const auto r = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_ball(S, r).size());
}

void BM_ProfileSerial(benchmark::State& state) {
  const Ball ball = build_ball(lamplighter_gens(), static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(depth_profile_serial(ball, 0xffffffffu).max_finite);
}

void BM_ProfileParallel(benchmark::State& state) {
  const Ball ball = build_ball(lamplighter_gens(), static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(depth_profile(ball, 0xffffffffu).max_finite);
}

}  // namespace

BENCHMARK_CAPTURE(BM_BallSerial, lamplighter, lamplighter_gens)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BallParallel, lamplighter, lamplighter_gens)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BallSerial, grid3, grid_gens)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BallParallel, grid3, grid_gens)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProfileSerial)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProfileParallel)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
