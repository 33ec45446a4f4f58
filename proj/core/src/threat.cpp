#include "bisar/threat.hpp"

#include <algorithm>
#include <cmath>

#include "bisar/errors.hpp"

namespace bisar {

namespace {

// Arc-length parametrisation of a waypoint polyline.
class ArcLengthTable {
public:
    explicit ArcLengthTable(const std::vector<Vec3>& points) : points_(points)
    {
        cumulative_.resize(points.size());
        cumulative_[0] = 0.0;
        for (std::size_t i = 1; i < points.size(); ++i)
            cumulative_[i] = cumulative_[i - 1] + distance(points[i - 1], points[i]);
    }

    double total() const { return cumulative_.back(); }

    Vec3 at(double s) const
    {
        s = std::clamp(s, 0.0, total());
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
        std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
        i = std::min(i > 0 ? i - 1 : 0, points_.size() - 2);
        const double seg_len = cumulative_[i + 1] - cumulative_[i];
        const double t = seg_len > 0.0 ? (s - cumulative_[i]) / seg_len : 0.0;
        return lerp(points_[i], points_[i + 1], t);
    }

private:
    const std::vector<Vec3>& points_;
    std::vector<double> cumulative_;
};

} // namespace

std::vector<ThreatSample> threat_trace(const FlightPath& path, const TerrainModel& terrain,
                                       const ThreatParams& params)
{
    validate(path);
    if (params.safe_clearance <= 0.0)
        throw ValidationError("threat: safe_clearance must be positive");
    if (params.sample_step <= 0.0)
        throw ValidationError("threat: sample_step must be positive");
    if (params.lateral_probe < 0.0)
        throw ValidationError("threat: lateral_probe must be non-negative");

    const ArcLengthTable table(path.points);
    const double length = table.total();
    const std::size_t intervals =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / params.sample_step)));

    std::vector<ThreatSample> trace(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) {
        const double s = length * static_cast<double>(k) / static_cast<double>(intervals);
        const Vec3 p = table.at(s);

        // Worst clearance over the sample itself plus an 8-point horizontal
        // ring; ring probes outside the terrain footprint are skipped.
        double c_min = terrain.clearance(p);
        if (params.lateral_probe > 0.0) {
            for (int a = 0; a < 8; ++a) {
                const double phi = 2.0 * M_PI * static_cast<double>(a) / 8.0;
                const Vec3 q{p.x + params.lateral_probe * std::cos(phi),
                             p.y + params.lateral_probe * std::sin(phi), p.z};
                if (terrain.contains(q.x, q.y))
                    c_min = std::min(c_min, terrain.clearance(q));
            }
        }

        const double deficit = std::clamp(
            (params.safe_clearance - c_min) / params.safe_clearance, 0.0, 1.0);
        trace[k] = ThreatSample{s, p, c_min, deficit * deficit};
    }
    return trace;
}

ThreatResult path_threat(const FlightPath& path, const TerrainModel& terrain,
                         const ThreatParams& params)
{
    const std::vector<ThreatSample> trace = threat_trace(path, terrain, params);
    ThreatResult result;
    result.samples = trace.size();
    double sum = 0.0;
    for (const ThreatSample& s : trace) {
        sum += s.contribution;
        if (s.min_clearance <= 0.0)
            result.collision = true;
    }
    result.value = sum / static_cast<double>(trace.size());
    return result;
}

} // namespace bisar
