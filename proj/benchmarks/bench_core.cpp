#include <benchmark/benchmark.h>

#include <cmath>

#include "wpmap/catalog.hpp"
#include "wpmap/curvature.hpp"
#include "wpmap/geodesic.hpp"

using namespace wpmap;

namespace {

Vec pt2(double a, double b) {
    Vec p(2);
    p << a, b;
    return p;
}

void BM_Christoffel(benchmark::State& state) {
    ChartManifold m = catalog_manifold("sphere2");
    Vec p = pt2(M_PI / 3, 0.4);
    for (auto _ : state) benchmark::DoNotOptimize(christoffel(m, p));
}
BENCHMARK(BM_Christoffel);

void BM_GeodesicSecond(benchmark::State& state) {
    ChartManifold m = catalog_manifold("hyperbolic2");
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate(m, pt2(0, 1), pt2(1, 0), 1.0, 1e-3));
}
BENCHMARK(BM_GeodesicSecond);

void BM_TensorT(benchmark::State& state) {
    WarpedProduct sph = catalog_warped("spheremodel");
    ProductRiemannianMap pi1 = ProductRiemannianMap::builtin(sph, "pi1");
    Vec p = pt2(M_PI / 4, 0.3);
    Vec u(2);
    u << 0, 1;
    for (auto _ : state) benchmark::DoNotOptimize(pi1.map().tensor_T(p, u, u));
}
BENCHMARK(BM_TensorT);

void BM_Riemann3d(benchmark::State& state) {
    WarpedProduct h3 = catalog_warped("h3model");
    const ChartManifold& m = h3.manifold();
    Vec p(3);
    p << 0.2, 0.1, -0.3;
    for (auto _ : state) benchmark::DoNotOptimize(riemann(m, p));
}
BENCHMARK(BM_Riemann3d);

void BM_VerticalFrame(benchmark::State& state) {
    WarpedProduct h3 = catalog_warped("h3model");
    ProductRiemannianMap pi1 = ProductRiemannianMap::builtin(h3, "pi1");
    Vec p(3);
    p << 0.2, 0.1, -0.3;
    for (auto _ : state) benchmark::DoNotOptimize(pi1.map().frame(p));
}
BENCHMARK(BM_VerticalFrame);

}  // namespace

BENCHMARK_MAIN();
