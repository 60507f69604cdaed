#include <benchmark/benchmark.h>

#include <numbers>

#include "gv/einstein_bogomolnyi.hpp"
#include "gv/git.hpp"
#include "gv/gravitating.hpp"
#include "gv/sections.hpp"
#include "gv/vortex.hpp"

using namespace gv;
constexpr double pi = std::numbers::pi;

static void BM_SphereLaplacian(benchmark::State& state) {
  const SurfaceGrid g = SurfaceGrid::sphere(int(state.range(0)), 2 * pi);
  const auto f = ScalarField::from_nodes(
      g, [](const QuadratureGrid& q, std::size_t i) { return std::exp(std::cos(q.first[i])); });
  for (auto _ : state) benchmark::DoNotOptimize(laplacian(f, g));
}
BENCHMARK(BM_SphereLaplacian)->Arg(16)->Arg(32)->Arg(64);

static void BM_TorusLaplacian(benchmark::State& state) {
  const SurfaceGrid g = SurfaceGrid::torus(int(state.range(0)), {0, 1}, 1.0);
  const auto f = ScalarField::from_nodes(
      g, [](const QuadratureGrid& q, std::size_t i) { return std::sin(2 * pi * q.first[i]); });
  for (auto _ : state) benchmark::DoNotOptimize(laplacian(f, g));
}
BENCHMARK(BM_TorusLaplacian)->Arg(32)->Arg(64)->Arg(128);

static void BM_VortexSphere(benchmark::State& state) {
  const SurfaceGrid g = SurfaceGrid::sphere(int(state.range(0)), 2 * pi);
  const SectionField s = build_section(Divisor({{{0.3, 0.2}, 1, false}, {{-1, 1}, 1, false}}), g);
  for (auto _ : state) benchmark::DoNotOptimize(solve_vortex({g, s, 8.0, 1e-10, 0}));
}
BENCHMARK(BM_VortexSphere)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_GravitatingTorus(benchmark::State& state) {
  const SurfaceGrid g = SurfaceGrid::torus(int(state.range(0)), {0, 1}, 1.0);
  const SectionField s = build_section(Divisor({{{0.3, 0.4}, 1, false}}), g);
  const GravProblem p{g, s, 12 * pi, 0.01, 1e-10, 100, false};
  const ScalarField f0 = solve_vortex({g, s, p.tau, 1e-11, 0}).f;
  const ScalarField u0 = ScalarField::constant(g, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_grav(p, u0, f0));
}
BENCHMARK(BM_GravitatingTorus)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_EinsteinBogomolnyi(benchmark::State& state) {
  const SurfaceGrid g = SurfaceGrid::sphere(int(state.range(0)), 2 * pi);
  const SectionField s = build_section(Divisor({{{0, 0}, 1, false}, {{}, 1, true}}), g);
  const EBProblem p{g, s, 6.0};
  for (auto _ : state) benchmark::DoNotOptimize(solve_eb(p));
}
BENCHMARK(BM_EinsteinBogomolnyi)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

static void BM_HilbertMumford(benchmark::State& state) {
  const Divisor d({{{0.1, 0.2}, 2, false}, {{1, -1}, 1, false}, {{-2, 0.5}, 2, false}, {{}, 1, true}});
  for (auto _ : state) benchmark::DoNotOptimize(hilbert_mumford_oracle(d));
}
BENCHMARK(BM_HilbertMumford);
BENCHMARK_MAIN();
