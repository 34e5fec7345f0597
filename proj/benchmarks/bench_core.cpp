#include "hypeig/exhaust2d.hpp"
#include "hypeig/horofunc.hpp"
#include "hypeig/radialode.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace hypeig;

static void BM_SolveRegular(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const EigenParams p(n, 0.5 * lambda1(n));
    for (auto _ : state) benchmark::DoNotOptimize(solve_regular(p, 20.0));
}
BENCHMARK(BM_SolveRegular)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_SolveSingular(benchmark::State& state) {
    const EigenParams p(3, state.range(0) * 0.25);
    for (auto _ : state) benchmark::DoNotOptimize(solve_singular(p, 1e-3, 10.0));
}
BENCHMARK(BM_SolveSingular)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_HoroResidual(benchmark::State& state) {
    const HoroProfile prof{EigenParams(3, 0.6), HoroSide::InteriorHoroball};
    double d = 0.0;
    for (auto _ : state) {
        d = d > 10.0 ? 0.01 : d + 0.01;
        benchmark::DoNotOptimize(busemann_ode_residual(prof, d));
    }
}
BENCHMARK(BM_HoroResidual);

// Grid construction and factorization scale like h^-2.
static void BM_BuildGrid(benchmark::State& state) {
    const double h = 1.0 / state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_grid(GeodesicBall(Point::origin(2), 3.0), kNoTruncation, Point::origin(2), h));
}
BENCHMARK(BM_BuildGrid)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_DirichletSolve(benchmark::State& state) {
    const double h = 1.0 / state.range(0);
    const GridPtr g = build_grid(GeodesicBall(Point::origin(2), 3.0), kNoTruncation, Point::origin(2), h);
    const BoundaryFn data = [](const Point& x) { return 1.0 + x[0] * x[1]; };
    for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(g, 0.2, data));
}
BENCHMARK(BM_DirichletSolve)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_Lambda1(benchmark::State& state) {
    const GridPtr g = build_grid(GeodesicBall(Point::origin(2), 2.0), kNoTruncation, Point::origin(2), 0.02);
    for (auto _ : state) benchmark::DoNotOptimize(dirichlet_lambda1(g));
}
BENCHMARK(BM_Lambda1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
