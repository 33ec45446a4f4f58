#ifndef BISAR_ENERGY_HPP
#define BISAR_ENERGY_HPP

#include "bisar/flightpath.hpp"
#include "bisar/vec3.hpp"

namespace bisar {

/// Fixed-wing platform constants for the propulsion-energy model.
struct PlatformParams {
    double mass = 10.0;        ///< kg
    double gravity = 9.81;     ///< m/s^2
    double drag_c1 = 9.26e-4;  ///< parasitic drag coefficient (W s^3/m^3)
    double drag_c2 = 2250.0;   ///< induced drag coefficient (W m/s)
    double v_min = 1.0;        ///< stall floor for the model's validity (m/s)
    double v_max = 1.0e3;      ///< structural speed ceiling (m/s)
    double a_max = 1.0e3;      ///< acceleration above this is flagged (m/s^2)
};

struct EnergyOptions {
    /// Floor each segment's total at its drag term: descending/decelerating
    /// segments recover no energy.
    bool clamp_regeneration = false;
};

/// Path energy split by mechanism. total is always the exact sum of the
/// three parts (same additions, no re-derivation).
struct EnergyBreakdown {
    double drag = 0.0;      ///< J, integral of drag power over time
    double potential = 0.0; ///< J, sum of m g dh
    double kinetic = 0.0;   ///< J, sum of 1/2 m d(v^2)
    double total = 0.0;     ///< J
};

/// Instantaneous propulsion power of a fixed-wing platform:
///   P(v, a) = c1 |v|^3 + (c2 / |v|) * (1 + (|a|^2 - (a.v/|v|)^2) / g^2)
/// i.e. parasitic drag plus induced drag inflated by the centripetal load
/// factor (the component of acceleration perpendicular to the velocity).
/// |v| must be >= params.v_min.
double drag_power(const Vec3& velocity, const Vec3& acceleration, const PlatformParams& params);

/// Total propulsion energy of a path:
///   E = sum_i [ P(v_i, a_i) T_i + m g dh_i + 1/2 m (s_{i+1}^2 - s_i^2) ]
/// accumulated in segment order. Waypoint speeds outside
/// [v_min, v_max] throw EvaluationError (the model is not valid there).
EnergyBreakdown path_energy(const FlightPath& path, const PlatformParams& params,
                            const EnergyOptions& options = {});

/// Largest segment |acceleration| along the path (m/s^2); used to flag
/// paths that exceed params.a_max.
double peak_acceleration(const FlightPath& path);

} // namespace bisar

#endif // BISAR_ENERGY_HPP
