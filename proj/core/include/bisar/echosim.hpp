#ifndef BISAR_ECHOSIM_HPP
#define BISAR_ECHOSIM_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bisar/sargeom.hpp"
#include "bisar/vec3.hpp"

namespace bisar {

/// Amplitude threshold of the -3 dB contour: 10^(-3/20).
inline constexpr double kMinus3dbAmplitude = 0.7079457843841379;

/// Full -3 dB width of |sinc(x)| in units of the Rayleigh resolution
/// (sinc zero spacing). Divides a measured -3 dB width to recover rho.
inline constexpr double kSincMinus3dbWidth = 0.8844867792525363;

/// Area of the -3 dB support of the ideal 2-D PSF sinc(x)sinc(y) in units
/// of rho_r * rho_a. Divides a measured -3 dB blob area to recover the
/// Rayleigh-equivalent cell area comparable with the gradient prediction.
inline constexpr double kPsf3dbAreaFactor = 0.6254827406755279;

/// Ideal point scatterer.
struct PointTarget {
    Vec3 position;
    double amplitude = 1.0;
};

/// Explicit fast-time sampling window (seconds from pulse emission epoch);
/// sample k lies at origin + k / sample_rate.
struct FastTimeGate {
    double origin = 0.0;
    std::size_t n_samples = 0;
};

/// Range-compressed echo data: one row per pulse, complex samples along
/// fast time.
struct EchoMatrix {
    std::size_t n_pulses = 0;
    std::size_t n_samples = 0;
    double fast_time_origin = 0.0; ///< s
    double fast_time_step = 0.0;   ///< s, = 1 / sample_rate
    std::vector<double> slow_times;            ///< pulse epochs on the path timeline (s)
    std::vector<std::complex<double>> data;    ///< row-major [pulse][sample]

    std::complex<double>& at(std::size_t pulse, std::size_t sample)
    {
        return data[pulse * n_samples + sample];
    }
    const std::complex<double>& at(std::size_t pulse, std::size_t sample) const
    {
        return data[pulse * n_samples + sample];
    }
};

/// Simulates range-compressed echoes of ideal point targets over the
/// aperture window. Pulses are spaced 1/PRF apart, symmetric about the
/// window centre (N_p = round(T_a * PRF)). Each target contributes
///   A * sinc(B (tau - R_bi/c)) * exp(-j 2 pi R_bi / lambda)
/// per pulse. Without an explicit gate the fast-time window is sized to
/// cover every target at every pulse plus a 64-sample pad; with an explicit
/// gate a target falling outside it is an EvaluationError.
EchoMatrix simulate_echo(const std::vector<PointTarget>& targets,
                         const IlluminatorTrajectory& illuminator, const FlightPath& path,
                         const ApertureWindow& window, const RadarParams& radar,
                         const std::optional<FastTimeGate>& gate = {}, int jobs = 1);

/// Ground-plane image raster: pixel (i, j) sits at
/// origin + (i*spacing, j*spacing, 0), row-major rows along y.
struct ImageGrid {
    Vec3 origin;
    double spacing = 1.0;
    std::size_t n_x = 0;
    std::size_t n_y = 0;
};

struct ComplexImage {
    ImageGrid grid;
    std::vector<std::complex<double>> data; ///< row-major [j][i]
    std::uint64_t clipped = 0; ///< pixel-pulse lookups outside the usable gate

    std::complex<double>& at(std::size_t i, std::size_t j)
    {
        return data[j * grid.n_x + i];
    }
    const std::complex<double>& at(std::size_t i, std::size_t j) const
    {
        return data[j * grid.n_x + i];
    }
    Vec3 pixel_position(double i, double j) const
    {
        return {grid.origin.x + i * grid.spacing, grid.origin.y + j * grid.spacing,
                grid.origin.z};
    }
};

/// Time-domain backprojection onto the grid. Every pixel accumulates, over
/// all pulses, the echo row interpolated at the pixel's bistatic delay
/// (8-tap Hann-windowed sinc) rotated back by exp(+j 2 pi R_bi / lambda),
/// normalised by the pulse count. Lookups whose interpolation stencil
/// leaves the gate contribute zero and are counted in `clipped`.
/// Paralleled over image rows; the result is independent of `jobs`.
ComplexImage backproject(const EchoMatrix& echo, const ImageGrid& grid,
                         const IlluminatorTrajectory& illuminator, const FlightPath& path,
                         const RadarParams& radar, int jobs = 1);

/// Profile directions for width measurements (ground plane, normalised).
struct ProfileDirections {
    Vec2 range_dir{1.0, 0.0};
    Vec2 azimuth_dir{0.0, 1.0};
};

/// Point-spread measurements around one response peak.
struct IrwMeasurement {
    Vec3 peak_position;        ///< refined peak location
    double peak_amplitude = 0.0;
    double width_range = 0.0;  ///< raw -3 dB width along range_dir (m)
    double width_azimuth = 0.0;///< raw -3 dB width along azimuth_dir (m)
    double rho_r = 0.0;        ///< width_range / kSincMinus3dbWidth
    double rho_a = 0.0;        ///< width_azimuth / kSincMinus3dbWidth
    double area_raw_3db = 0.0; ///< -3 dB blob pixel area (m^2)
    double cell_area = 0.0;    ///< area_raw_3db / kPsf3dbAreaFactor
    double pslr_db = 0.0;      ///< peak sidelobe ratio (dB, negative)
};

/// Measures the impulse response nearest `near`: quadratic-refined peak,
/// -3 dB widths along the given directions (image resampled at 1/16 pixel
/// with the windowed-sinc kernel), -3 dB blob area by flood fill, and the
/// first-sidelobe level. Throws EvaluationError when the peak or its -3 dB
/// blob touches the image border (grid too small to measure).
IrwMeasurement measure_irw(const ComplexImage& image, const Vec3& near,
                           const ProfileDirections& directions = {});

enum class TargetRole { reference, min_cell, max_cell };

/// One predicted-vs-measured comparison.
struct ResolutionCheck {
    TargetRole role = TargetRole::reference;
    std::size_t sample_index = 0;   ///< index into the scene sample grid
    ResolutionSample predicted;
    IrwMeasurement measured;
    double area_ratio = 0.0;        ///< measured.cell_area / predicted.cell_area
};

struct VerifyOptions {
    double oversample = 10.0;        ///< pixels per min(rho_r, rho_a)
    double half_extent_cells = 6.0;  ///< image half-size in units of max(rho_r, rho_a)
    int jobs = 1;
};

/// End-to-end resolution check: places unit point targets on the scene
/// sample grid, simulates their echoes once, then images the scene-centre
/// (reference), smallest-cell and largest-cell targets on fine local grids
/// and compares measured Rayleigh-equivalent cell areas against the
/// gradient-method predictions.
std::vector<ResolutionCheck> verify_resolution(const IlluminatorTrajectory& illuminator,
                                               const FlightPath& path,
                                               const ApertureWindow& window,
                                               const SceneSpec& scene, const RadarParams& radar,
                                               const VerifyOptions& options = {});

} // namespace bisar

#endif // BISAR_ECHOSIM_HPP
