#include <benchmark/benchmark.h>

#include "simrad/filter.hpp"
#include "simrad/invert.hpp"
#include "simrad/xform.hpp"

using namespace simrad;

namespace {

PlaneGeometry plane_geometry(int nd) {
    PlaneGeometry g;
    g.ntheta = nd;
    g.nphi = nd;
    return g;
}

LineGeometry line_geometry(int nd) {
    LineGeometry g;
    g.ntheta = nd;
    g.nphi = nd;
    g.nuv = 65;
    return g;
}

void BM_RadonPlane(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Volume v = gaussian_phantom(Vec3(0.3, 0.0, 0.0), 1.0, n, 9.6 / n);
    const PlaneGeometry g = plane_geometry(16);
    for (auto _ : state)
        benchmark::DoNotOptimize(radon_plane(v, g).data().data());
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.ntheta) * g.nphi * g.nt);
}
BENCHMARK(BM_RadonPlane)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_XRay(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Volume v = gaussian_phantom(Vec3(0.3, 0.0, 0.0), 1.0, n, 9.6 / n);
    const LineGeometry g = line_geometry(8);
    for (auto _ : state)
        benchmark::DoNotOptimize(xray(v, g).data().data());
}
BENCHMARK(BM_XRay)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Multiplier(benchmark::State& state) {
    PlaneSinogram s(plane_geometry(32));
    for (std::size_t q = 0; q < s.data().size(); ++q)
        s.data()[q] = static_cast<double>(q % 17) - 8.0;
    const MultiplierSpec spec = MultiplierSpec::plane_unitarization().squared();
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_multiplier_plane(s, spec).data().data());
}
BENCHMARK(BM_Multiplier)->Unit(benchmark::kMillisecond);

void BM_FbpPlane(benchmark::State& state) {
    const Volume v = gaussian_phantom(Vec3(0.3, 0.0, 0.0), 1.0, 32, 0.3);
    const PlaneSinogram s = radon_plane(v, plane_geometry(32));
    for (auto _ : state)
        benchmark::DoNotOptimize(invert_fbp_plane(s, v.grid()).data().data());
}
BENCHMARK(BM_FbpPlane)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
