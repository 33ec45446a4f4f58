#include "bisar/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "bisar/errors.hpp"

namespace bisar {

double drag_power(const Vec3& velocity, const Vec3& acceleration, const PlatformParams& params)
{
    const double speed = norm(velocity);
    if (speed < params.v_min) {
        std::ostringstream msg;
        msg << "drag_power: speed " << speed << " m/s below model validity floor v_min = "
            << params.v_min << " m/s";
        throw EvaluationError(msg.str());
    }
    const double a2 = norm2(acceleration);
    const double along = dot(acceleration, velocity) / speed;
    // Squared acceleration component perpendicular to the velocity; the max
    // guards against cancellation noise when a is exactly parallel to v.
    const double perp2 = std::max(0.0, a2 - along * along);
    const double load_factor = 1.0 + perp2 / (params.gravity * params.gravity);
    return params.drag_c1 * speed * speed * speed + params.drag_c2 / speed * load_factor;
}

EnergyBreakdown path_energy(const FlightPath& path, const PlatformParams& params,
                            const EnergyOptions& options)
{
    const std::vector<SegmentKinematics> segs = segment_kinematics(path);
    for (std::size_t i = 0; i < path.speeds.size(); ++i) {
        const double s = path.speeds[i];
        if (s < params.v_min || s > params.v_max) {
            std::ostringstream msg;
            msg << "path_energy: waypoint " << i << " speed " << s
                << " m/s outside platform envelope [" << params.v_min << ", "
                << params.v_max << "] m/s";
            throw EvaluationError(msg.str());
        }
    }

    EnergyBreakdown e;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const double drag_j = drag_power(segs[i].velocity, segs[i].acceleration, params) *
                              segs[i].duration;
        double potential_j = params.mass * params.gravity * segs[i].climb;
        double kinetic_j = 0.5 * params.mass *
            (path.speeds[i + 1] * path.speeds[i + 1] - path.speeds[i] * path.speeds[i]);
        if (options.clamp_regeneration && potential_j + kinetic_j < 0.0) {
            // No recovery: the segment contributes only its drag term.
            potential_j = 0.0;
            kinetic_j = 0.0;
        }
        e.drag += drag_j;
        e.potential += potential_j;
        e.kinetic += kinetic_j;
    }
    e.total = e.drag + e.potential + e.kinetic;
    return e;
}

double peak_acceleration(const FlightPath& path)
{
    double peak = 0.0;
    for (const SegmentKinematics& seg : segment_kinematics(path))
        peak = std::max(peak, norm(seg.acceleration));
    return peak;
}

} // namespace bisar
