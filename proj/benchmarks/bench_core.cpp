// Microbenchmarks for the hot evaluator paths: terrain sampling, drag power,
// threat integration, resolution gradients and backprojection.

#include <benchmark/benchmark.h>

#include "bisar/echosim.hpp"
#include "bisar/energy.hpp"
#include "bisar/sargeom.hpp"
#include "bisar/terrain.hpp"
#include "bisar/threat.hpp"

namespace {

using namespace bisar;

TerrainModel make_terrain()
{
    return TerrainModel::synthesize(
        500.0, 20000.0, 20000.0, 50.0,
        {HillSpec{7000.0, 7000.0, 2000.0, 900.0, HillProfile::cone},
         HillSpec{18000.0, 10000.0, 1000.0, 200.0, HillProfile::cone}});
}

void bm_height_at(benchmark::State& state)
{
    const TerrainModel terrain = make_terrain();
    double x = 1000.0;
    for (auto _ : state) {
        x = x >= 19000.0 ? 1000.0 : x + 13.7;
        benchmark::DoNotOptimize(terrain.height_at(x, 0.73 * x));
    }
}
BENCHMARK(bm_height_at);

void bm_drag_power(benchmark::State& state)
{
    const PlatformParams params;
    const Vec3 v{35.0, 12.0, 1.0};
    const Vec3 a{0.4, -1.2, 0.1};
    for (auto _ : state)
        benchmark::DoNotOptimize(drag_power(v, a, params));
}
BENCHMARK(bm_drag_power);

void bm_path_threat(benchmark::State& state)
{
    const TerrainModel terrain = make_terrain();
    const FlightPath path = make_line_path(Vec3{3000.0, 3500.0, 1500.0},
                                           Vec3{15000.0, 15600.0, 1500.0}, 200, 50.0);
    const ThreatParams params{300.0, 50.0, 100.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(path_threat(path, terrain, params));
}
BENCHMARK(bm_path_threat);

void bm_resolution_cell(benchmark::State& state)
{
    const PlatformState tx{Vec3{12000.0, -2.4e7, 3.5786e7}, Vec3{700.0, 0.0, 0.0}};
    const PlatformState rx{Vec3{13700.0, 14300.0, 1500.0}, Vec3{35.2, 35.5, 0.0}};
    const Vec3 target{12000.0, 16000.0, 500.0};
    const RadarParams radar;
    for (auto _ : state)
        benchmark::DoNotOptimize(resolution_cell(tx, rx, target, radar));
}
BENCHMARK(bm_resolution_cell);

void bm_backproject(benchmark::State& state)
{
    const IlluminatorTrajectory tx{Vec3{3000.0, 1000.0, 3000.0}, Vec3{}, 0.0};
    const FlightPath path = make_line_path(Vec3{1000.0, 2600.0, 800.0},
                                           Vec3{5000.0, 2600.0, 800.0}, 200, 40.0);
    RadarParams radar;
    radar.wavelength = 0.12;
    radar.bandwidth = 6.0e7;
    radar.prf = 400.0;
    radar.sample_rate = 7.2e7;
    radar.aperture_time = 0.4; // short aperture keeps one iteration ~10 ms
    SceneSpec scene;
    scene.center = Vec3{3000.0, 4000.0, 0.0};
    scene.samples = 1;
    const ApertureWindow window = place_aperture_window(path, scene, radar);
    const std::vector<PointTarget> targets{PointTarget{scene.center, 1.0}};
    const EchoMatrix echo = simulate_echo(targets, tx, path, window, radar);

    ImageGrid grid;
    grid.spacing = 0.5;
    grid.n_x = 64;
    grid.n_y = 64;
    grid.origin = Vec3{scene.center.x - 16.0, scene.center.y - 16.0, 0.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(backproject(echo, grid, tx, path, radar));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(grid.n_x * grid.n_y * echo.n_pulses));
}
BENCHMARK(bm_backproject);

} // namespace

BENCHMARK_MAIN();
