#ifndef BISAR_SARGEOM_HPP
#define BISAR_SARGEOM_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bisar/flightpath.hpp"
#include "bisar/vec3.hpp"

namespace bisar {

/// Speed of light (m/s).
inline constexpr double kSpeedOfLight = 299792458.0;

/// sin(psi) below this is treated as a degenerate resolution geometry.
inline constexpr double kDegenerateSinPsi = 1e-3;

/// Transmitter flying a straight constant-velocity leg; positions are
/// extrapolated linearly from the reference epoch.
struct IlluminatorTrajectory {
    Vec3 ref_position;  ///< position at ref_time (m)
    Vec3 ref_velocity;  ///< constant velocity (m/s)
    double ref_time = 0.0;

    Vec3 position_at(double t) const { return ref_position + ref_velocity * (t - ref_time); }
};

/// Snapshot of one platform used for gradient evaluation.
struct PlatformState {
    Vec3 position;
    Vec3 velocity;
};

struct RadarParams {
    double wavelength = 0.24;       ///< m
    double bandwidth = 1.0e8;       ///< transmitted bandwidth B (Hz)
    double prf = 200.0;             ///< pulse repetition frequency (Hz)
    double sample_rate = 1.2e8;     ///< fast-time complex sample rate (Hz)
    double aperture_time = 4.0;     ///< synthetic aperture duration T_a (s)
    int bits_per_sample = 128;      ///< stored bits per raw complex sample
};

/// Ground patch to be imaged: axis-aligned rectangle centred on `center`,
/// extents in metres, sampled on a sqrt(samples) x sqrt(samples) grid
/// (samples must be a positive perfect square; corners included, all points
/// at z = center.z).
struct SceneSpec {
    Vec3 center;
    double range_extent = 1000.0;   ///< W_r (m)
    double azimuth_extent = 1000.0; ///< W_a (m)
    std::size_t samples = 25;       ///< N_s
};

/// Synthetic-aperture interval on a flight path's traversal timeline.
struct ApertureWindow {
    double center_time = 0.0;    ///< s, on the path timeline
    double duration = 0.0;       ///< T_a (s)
    std::size_t start_index = 0; ///< last waypoint reached at/before window start

    double start_time() const { return center_time - 0.5 * duration; }
    double end_time() const { return center_time + 0.5 * duration; }
};

/// Sum of the two slant ranges |tx - target| + |rx - target| (m).
double bistatic_range(const Vec3& tx, const Vec3& rx, const Vec3& target);

/// Bistatic Doppler frequency of a ground target for moving platforms:
/// f_d = -(1/lambda) d(R_bi)/dt (Hz).
double bistatic_doppler(const PlatformState& tx, const PlatformState& rx,
                        const Vec3& target, double wavelength);

/// Horizontal (ground-plane) gradient of the bistatic range at the target:
/// the x,y components of unit(target - tx) + unit(target - rx).
Vec2 range_gradient_ground(const Vec3& tx, const Vec3& rx, const Vec3& target);

/// Horizontal gradient of the bistatic Doppler frequency at the target.
/// Analytic form: (1/lambda) sum_p (v_p - u_p (u_p . v_p)) / R_p projected
/// on the ground plane, where u_p is the target-to-platform unit vector.
Vec2 doppler_gradient_ground(const PlatformState& tx, const PlatformState& rx,
                             const Vec3& target, double wavelength);

/// Resolution figures of one ground target.
struct ResolutionSample {
    Vec3 target;
    double rho_r = 0.0;     ///< ground range resolution c / (B |grad R|) (m)
    double rho_a = 0.0;     ///< ground azimuth resolution (1/T_a) / |grad f_d| (m)
    double psi = 0.0;       ///< angle between the two gradients, folded into (0, pi/2] (rad)
    double cell_area = 0.0; ///< S_c = rho_r rho_a / sin(psi) (m^2)
};

/// Gradient-method resolution cell at one target for the given platform
/// snapshot. Throws DegenerateGeometryError when either gradient vanishes
/// or sin(psi) < kDegenerateSinPsi.
ResolutionSample resolution_cell(const PlatformState& tx, const PlatformState& rx,
                                 const Vec3& target, const RadarParams& radar);

/// The N_s ground sample points of a scene (row-major, south-west first).
std::vector<Vec3> scene_sample_grid(const SceneSpec& scene);

/// Scene-wide resolution score.
struct SceneResolution {
    double sbar_c = 0.0;          ///< (max S_c / min S_c) * mean S_c (m^2)
    double disequilibrium = 0.0;  ///< max S_c / min S_c, >= 1
    std::vector<ResolutionSample> samples;
};

/// Combines per-sample cell areas into the scene score:
/// sbar_c = (max/min) * mean. Requires at least one sample.
SceneResolution combine_scene_samples(std::vector<ResolutionSample> samples);

/// Evaluates the resolution cell at every scene sample point using the
/// platform states at the aperture window centre.
SceneResolution scene_resolution(const IlluminatorTrajectory& illuminator,
                                 const FlightPath& path, const ApertureWindow& window,
                                 const SceneSpec& scene, const RadarParams& radar);

/// Raw echo tensor dimensions and size.
struct EchoDataSize {
    std::uint64_t n_azimuth = 0;  ///< pulses recorded
    std::uint64_t n_range = 0;    ///< fast-time samples per pulse
    std::uint64_t bits = 0;       ///< bits_per_sample * n_azimuth * n_range
    double delta_r_bi = 0.0;      ///< bistatic range spread over the scene (m)
};

/// Pure counting rule:
///   N_a = ceil((W_a / v + T_a) PRF),  N_r = ceil((delta_R_bi / c) f_s),
///   bits = bits_per_sample * N_a * N_r.
/// `mean_speed` is the platform speed used to cross the azimuth extent.
EchoDataSize echo_data_counts(double azimuth_extent, double mean_speed,
                              double delta_r_bi, const RadarParams& radar);

/// Echo size for a concrete geometry: delta_R_bi is the max-min spread of
/// the bistatic range over the scene sample grid evaluated at the window
/// centre, and the speed is the mean path speed inside the window.
EchoDataSize echo_data_size(const IlluminatorTrajectory& illuminator, const FlightPath& path,
                            const ApertureWindow& window, const SceneSpec& scene,
                            const RadarParams& radar);

/// Places the aperture window of length radar.aperture_time on the path:
/// centred at the traversal time of the waypoint nearest the scene centre,
/// shifted inward when it would overhang an end (a window longer than the
/// whole traversal is an EvaluationError).
ApertureWindow place_aperture_window(const FlightPath& path, const SceneSpec& scene,
                                     const RadarParams& radar);

/// Same, but centred at an explicit traversal time.
ApertureWindow place_aperture_window_at(const FlightPath& path, double center_time,
                                        const RadarParams& radar);

} // namespace bisar

#endif // BISAR_SARGEOM_HPP
