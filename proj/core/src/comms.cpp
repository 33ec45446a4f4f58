#include "bisar/comms.hpp"

#include <cmath>

#include "bisar/errors.hpp"

namespace bisar {

namespace {

void check_params(const CommParams& params)
{
    if (params.bandwidth <= 0.0 || params.tx_power <= 0.0 || params.ref_gain <= 0.0 ||
        params.noise_power <= 0.0)
        throw ValidationError("CommParams: bandwidth, power, gain and noise must be positive");
}

// Segment range [first, last) to iterate for a path, honouring the optional
// transmit window.
std::pair<std::size_t, std::size_t> segment_range(const FlightPath& path,
                                                  const CommParams& params)
{
    const std::size_t n_segments = path.points.size() - 1;
    if (!params.window)
        return {0, n_segments};
    const CommWindow& w = *params.window;
    if (w.first_segment >= w.last_segment || w.last_segment > n_segments)
        throw ValidationError("CommWindow: segment range [" + std::to_string(w.first_segment) +
                              ", " + std::to_string(w.last_segment) + ") invalid for " +
                              std::to_string(n_segments) + " segments");
    return {w.first_segment, w.last_segment};
}

} // namespace

double segment_capacity(double duration, double distance, const CommParams& params)
{
    check_params(params);
    if (duration < 0.0)
        throw ValidationError("segment_capacity: negative duration");
    if (distance <= 0.0)
        throw ValidationError("segment_capacity: station distance must be positive");
    const double snr = params.tx_power * params.ref_gain /
                       (params.noise_power * distance * distance);
    return duration * params.bandwidth * std::log2(1.0 + snr);
}

LinkBudgetReport path_capacity(const FlightPath& path, const CommParams& params)
{
    check_params(params);
    const std::vector<SegmentKinematics> segs = segment_kinematics(path);
    const auto [first, last] = segment_range(path, params);

    LinkBudgetReport report;
    report.per_segment.reserve(last - first);

    // Kahan compensated sum: the total must not drift with segment count.
    double sum = 0.0;
    double carry = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        const Vec3 midpoint = lerp(path.points[i], path.points[i + 1], 0.5);
        const double l = distance(midpoint, params.station);
        const double bits = segment_capacity(segs[i].duration, l, params);
        report.per_segment.push_back(SegmentRate{segs[i].duration, l, bits / segs[i].duration});

        const double y = bits - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    report.d_com_bits = sum;
    return report;
}

double check_los_assumption(const FlightPath& path, const CommParams& params,
                            const TerrainModel& terrain)
{
    check_params(params);
    const std::vector<SegmentKinematics> segs = segment_kinematics(path);
    const auto [first, last] = segment_range(path, params);

    double total = 0.0;
    double visible = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        const Vec3 midpoint = lerp(path.points[i], path.points[i + 1], 0.5);
        total += segs[i].duration;
        if (terrain.line_of_sight(midpoint, params.station))
            visible += segs[i].duration;
    }
    return total > 0.0 ? visible / total : 1.0;
}

} // namespace bisar
