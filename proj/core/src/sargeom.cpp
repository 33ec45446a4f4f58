#include "bisar/sargeom.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bisar/errors.hpp"

namespace bisar {

namespace {

void check_radar(const RadarParams& radar)
{
    if (radar.wavelength <= 0.0 || radar.bandwidth <= 0.0 || radar.prf <= 0.0 ||
        radar.sample_rate <= 0.0 || radar.aperture_time <= 0.0 || radar.bits_per_sample <= 0)
        throw ValidationError("RadarParams: all radar parameters must be positive");
}

std::size_t scene_grid_side(const SceneSpec& scene)
{
    if (scene.samples == 0)
        throw ValidationError("SceneSpec: samples must be positive");
    const std::size_t side =
        static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(scene.samples))));
    if (side * side != scene.samples)
        throw ValidationError("SceneSpec: samples (" + std::to_string(scene.samples) +
                              ") must be a perfect square");
    return side;
}

} // namespace

double bistatic_range(const Vec3& tx, const Vec3& rx, const Vec3& target)
{
    return distance(tx, target) + distance(rx, target);
}

double bistatic_doppler(const PlatformState& tx, const PlatformState& rx,
                        const Vec3& target, double wavelength)
{
    double rate = 0.0; // d(R_bi)/dt
    for (const PlatformState* p : {&tx, &rx}) {
        const Vec3 to_platform = p->position - target;
        rate += dot(p->velocity, normalized(to_platform));
    }
    return -rate / wavelength;
}

Vec2 range_gradient_ground(const Vec3& tx, const Vec3& rx, const Vec3& target)
{
    const Vec3 g = normalized(target - tx) + normalized(target - rx);
    return horizontal(g);
}

Vec2 doppler_gradient_ground(const PlatformState& tx, const PlatformState& rx,
                             const Vec3& target, double wavelength)
{
    if (wavelength <= 0.0)
        throw ValidationError("doppler_gradient_ground: wavelength must be positive");
    // grad_x f_d = (1/lambda) sum_p (v_p - u_p (u_p . v_p)) / R_p,
    // u_p = (p - x)/R_p: only the velocity component perpendicular to the
    // line of sight moves the Doppler across the ground.
    Vec3 g{};
    for (const PlatformState* p : {&tx, &rx}) {
        const Vec3 to_platform = p->position - target;
        const double range = norm(to_platform);
        const Vec3 u = to_platform / range;
        g += (p->velocity - u * dot(u, p->velocity)) / range;
    }
    return horizontal(g / wavelength);
}

ResolutionSample resolution_cell(const PlatformState& tx, const PlatformState& rx,
                                 const Vec3& target, const RadarParams& radar)
{
    check_radar(radar);
    const Vec2 grad_r = range_gradient_ground(tx.position, rx.position, target);
    const Vec2 grad_f = doppler_gradient_ground(tx, rx, target, radar.wavelength);
    const double gr = norm(grad_r);
    const double gf = norm(grad_f);
    if (gr < 1e-12)
        throw DegenerateGeometryError(
            "resolution_cell: ground range gradient vanishes (forward-scatter geometry)");
    if (gf < 1e-15)
        throw DegenerateGeometryError(
            "resolution_cell: ground Doppler gradient vanishes (no relative motion)");

    ResolutionSample s;
    s.target = target;
    s.rho_r = kSpeedOfLight / (radar.bandwidth * gr);
    s.rho_a = (1.0 / radar.aperture_time) / gf;
    // Angle between the gradient *lines*, folded into (0, pi/2].
    const double cos_psi = std::clamp(std::abs(dot(grad_r, grad_f) / (gr * gf)), 0.0, 1.0);
    s.psi = std::acos(cos_psi);
    const double sin_psi = std::sin(s.psi);
    if (sin_psi < kDegenerateSinPsi) {
        std::ostringstream msg;
        msg << "resolution_cell: gradients nearly parallel, sin(psi) = " << sin_psi
            << " below " << kDegenerateSinPsi;
        throw DegenerateGeometryError(msg.str());
    }
    s.cell_area = s.rho_r * s.rho_a / sin_psi;
    return s;
}

std::vector<Vec3> scene_sample_grid(const SceneSpec& scene)
{
    if (scene.range_extent <= 0.0 || scene.azimuth_extent <= 0.0)
        throw ValidationError("SceneSpec: extents must be positive");
    const std::size_t side = scene_grid_side(scene);

    std::vector<Vec3> grid;
    grid.reserve(scene.samples);
    for (std::size_t j = 0; j < side; ++j) {
        for (std::size_t i = 0; i < side; ++i) {
            // side == 1 degenerates to the centre point.
            const double fx = side > 1
                ? static_cast<double>(i) / static_cast<double>(side - 1) - 0.5 : 0.0;
            const double fy = side > 1
                ? static_cast<double>(j) / static_cast<double>(side - 1) - 0.5 : 0.0;
            grid.push_back(Vec3{scene.center.x + fx * scene.range_extent,
                                scene.center.y + fy * scene.azimuth_extent,
                                scene.center.z});
        }
    }
    return grid;
}

SceneResolution combine_scene_samples(std::vector<ResolutionSample> samples)
{
    if (samples.empty())
        throw ValidationError("combine_scene_samples: no samples");
    double sum = 0.0;
    double lo = samples.front().cell_area;
    double hi = lo;
    for (const ResolutionSample& s : samples) {
        sum += s.cell_area;
        lo = std::min(lo, s.cell_area);
        hi = std::max(hi, s.cell_area);
    }
    SceneResolution r;
    r.disequilibrium = hi / lo;
    r.sbar_c = r.disequilibrium * (sum / static_cast<double>(samples.size()));
    r.samples = std::move(samples);
    return r;
}

SceneResolution scene_resolution(const IlluminatorTrajectory& illuminator,
                                 const FlightPath& path, const ApertureWindow& window,
                                 const SceneSpec& scene, const RadarParams& radar)
{
    check_radar(radar);
    const PathTimeline timeline(path);
    const double t0 = window.center_time;
    const PlatformState tx{illuminator.position_at(t0), illuminator.ref_velocity};
    const PlatformState rx{timeline.position_at(t0), timeline.velocity_at(t0)};

    std::vector<ResolutionSample> samples;
    samples.reserve(scene.samples);
    for (const Vec3& target : scene_sample_grid(scene))
        samples.push_back(resolution_cell(tx, rx, target, radar));
    return combine_scene_samples(std::move(samples));
}

EchoDataSize echo_data_counts(double azimuth_extent, double mean_speed,
                              double delta_r_bi, const RadarParams& radar)
{
    check_radar(radar);
    if (azimuth_extent <= 0.0)
        throw ValidationError("echo_data_counts: azimuth extent must be positive");
    if (mean_speed <= 0.0)
        throw ValidationError("echo_data_counts: mean speed must be positive");
    if (delta_r_bi < 0.0)
        throw ValidationError("echo_data_counts: negative range spread");

    EchoDataSize size;
    size.delta_r_bi = delta_r_bi;
    size.n_azimuth = static_cast<std::uint64_t>(
        std::ceil((azimuth_extent / mean_speed + radar.aperture_time) * radar.prf));
    size.n_range = static_cast<std::uint64_t>(
        std::ceil(delta_r_bi / kSpeedOfLight * radar.sample_rate));
    size.n_range = std::max<std::uint64_t>(size.n_range, 1);
    size.bits = static_cast<std::uint64_t>(radar.bits_per_sample) * size.n_azimuth * size.n_range;
    return size;
}

EchoDataSize echo_data_size(const IlluminatorTrajectory& illuminator, const FlightPath& path,
                            const ApertureWindow& window, const SceneSpec& scene,
                            const RadarParams& radar)
{
    const PathTimeline timeline(path);
    const Vec3 tx = illuminator.position_at(window.center_time);
    const Vec3 rx = timeline.position_at(window.center_time);

    double lo = 0.0;
    double hi = 0.0;
    bool first = true;
    for (const Vec3& target : scene_sample_grid(scene)) {
        const double r = bistatic_range(tx, rx, target);
        lo = first ? r : std::min(lo, r);
        hi = first ? r : std::max(hi, r);
        first = false;
    }

    const double traversed = timeline.length_between(window.start_time(), window.end_time());
    const double mean_speed = traversed / window.duration;
    return echo_data_counts(scene.azimuth_extent, mean_speed, hi - lo, radar);
}

ApertureWindow place_aperture_window_at(const FlightPath& path, double center_time,
                                        const RadarParams& radar)
{
    check_radar(radar);
    const PathTimeline timeline(path);
    const double t_a = radar.aperture_time;
    if (t_a > timeline.duration()) {
        std::ostringstream msg;
        msg << "aperture window: T_a = " << t_a << " s exceeds path traversal time "
            << timeline.duration() << " s";
        throw EvaluationError(msg.str());
    }
    // Shift inward when the requested centre would overhang an end.
    const double center = std::clamp(center_time, 0.5 * t_a, timeline.duration() - 0.5 * t_a);

    ApertureWindow w;
    w.center_time = center;
    w.duration = t_a;
    w.start_index = timeline.waypoint_before(w.start_time());
    return w;
}

ApertureWindow place_aperture_window(const FlightPath& path, const SceneSpec& scene,
                                     const RadarParams& radar)
{
    validate(path);
    const PathTimeline timeline(path);
    // Waypoint nearest the scene centre defines the nominal window centre.
    std::size_t best = 0;
    double best_d2 = norm2(path.points[0] - scene.center);
    for (std::size_t i = 1; i < path.points.size(); ++i) {
        const double d2 = norm2(path.points[i] - scene.center);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return place_aperture_window_at(path, timeline.time_at(best), radar);
}

} // namespace bisar
