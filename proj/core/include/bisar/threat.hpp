#ifndef BISAR_THREAT_HPP
#define BISAR_THREAT_HPP

#include <cstddef>
#include <vector>

#include "bisar/flightpath.hpp"
#include "bisar/terrain.hpp"
#include "bisar/vec3.hpp"

namespace bisar {

struct ThreatParams {
    double safe_clearance = 300.0; ///< d_safe: clearance at/above this scores 0 (m)
    double sample_step = 50.0;     ///< arc-length resampling step along the path (m)
    double lateral_probe = 100.0;  ///< radius of the 8-point ring probe (m)
};

/// One resampled point of the threat trace.
struct ThreatSample {
    double arc_length = 0.0;      ///< distance from path start (m)
    Vec3 position;                ///< resampled path point
    double min_clearance = 0.0;   ///< worst clearance over point + ring probes (m)
    double contribution = 0.0;    ///< clamp((d_safe - c_min)/d_safe, 0, 1)^2
};

struct ThreatResult {
    double value = 0.0;     ///< mean contribution over all samples, in [0, 1]
    bool collision = false; ///< any sample with min_clearance <= 0
    std::size_t samples = 0;
};

/// Per-sample threat trace. The path is resampled by arc length at
/// params.sample_step (endpoints always included). At every sample the
/// clearance is probed at the point itself and at 8 ring points of radius
/// params.lateral_probe around it in the horizontal plane; ring points
/// falling outside the terrain footprint are skipped (the path point itself
/// must be inside). The worst clearance drives the quadratic penalty.
std::vector<ThreatSample> threat_trace(const FlightPath& path, const TerrainModel& terrain,
                                       const ThreatParams& params);

/// Terrain-threat score of a path: mean of the per-sample contributions.
ThreatResult path_threat(const FlightPath& path, const TerrainModel& terrain,
                         const ThreatParams& params);

} // namespace bisar

#endif // BISAR_THREAT_HPP
