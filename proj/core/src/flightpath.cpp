#include "bisar/flightpath.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bisar/errors.hpp"

namespace bisar {

namespace {

// Position tolerance (s) when clamping timeline queries at the ends.
constexpr double kTimeSlack = 1e-9;

Vec3 segment_direction(const FlightPath& path, std::size_t i)
{
    return normalized(path.points[i + 1] - path.points[i]);
}

// Tangent velocity assigned to each waypoint: speed along the normalised
// average of the adjacent segment directions (one-sided at the ends).
std::vector<Vec3> waypoint_velocities(const FlightPath& path)
{
    const std::size_t n = path.points.size();
    std::vector<Vec3> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 dir;
        if (i == 0) {
            dir = segment_direction(path, 0);
        } else if (i == n - 1) {
            dir = segment_direction(path, n - 2);
        } else {
            const Vec3 sum = segment_direction(path, i - 1) + segment_direction(path, i);
            const double len = norm(sum);
            // Exactly reversing segments have no defined tangent.
            if (len < 1e-12)
                throw ValidationError("segment_kinematics: path reverses onto itself at waypoint " +
                                      std::to_string(i));
            dir = sum / len;
        }
        v[i] = dir * path.speeds[i];
    }
    return v;
}

} // namespace

void validate(const FlightPath& path)
{
    if (path.points.size() < 2)
        throw ValidationError("FlightPath: need at least 2 waypoints");
    if (path.speeds.size() != path.points.size())
        throw ValidationError("FlightPath: speeds count (" + std::to_string(path.speeds.size()) +
                              ") does not match waypoint count (" +
                              std::to_string(path.points.size()) + ")");
    for (std::size_t i = 0; i < path.speeds.size(); ++i) {
        if (!(path.speeds[i] > 0.0) || !std::isfinite(path.speeds[i]))
            throw ValidationError("FlightPath: speed at waypoint " + std::to_string(i) +
                                  " must be positive and finite");
    }
    for (const Vec3& p : path.points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            throw ValidationError("FlightPath: non-finite waypoint coordinate");
    }
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
        if (norm2(path.points[i + 1] - path.points[i]) == 0.0)
            throw ValidationError("FlightPath: zero-length segment at waypoint " +
                                  std::to_string(i));
    }
}

std::vector<SegmentKinematics> segment_kinematics(const FlightPath& path)
{
    validate(path);
    const std::vector<Vec3> wv = waypoint_velocities(path);
    std::vector<SegmentKinematics> out(path.points.size() - 1);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Vec3 delta = path.points[i + 1] - path.points[i];
        const double len = norm(delta);
        const double mean_speed = 0.5 * (path.speeds[i] + path.speeds[i + 1]);
        const double duration = len / mean_speed;
        out[i].velocity = delta / duration;
        out[i].acceleration = (wv[i + 1] - wv[i]) / duration;
        out[i].duration = duration;
        out[i].climb = delta.z;
    }
    return out;
}

double path_length(const FlightPath& path)
{
    validate(path);
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i)
        len += distance(path.points[i], path.points[i + 1]);
    return len;
}

double total_duration(const FlightPath& path)
{
    double t = 0.0;
    for (const SegmentKinematics& seg : segment_kinematics(path))
        t += seg.duration;
    return t;
}

FlightPath make_line_path(const Vec3& start, const Vec3& end, std::size_t n, double speed)
{
    if (n < 2)
        throw ValidationError("make_line_path: need at least 2 waypoints");
    if (!(speed > 0.0))
        throw ValidationError("make_line_path: speed must be positive");
    if (norm2(end - start) == 0.0)
        throw ValidationError("make_line_path: start and end coincide");

    FlightPath path;
    path.points.resize(n);
    path.speeds.assign(n, speed);
    path.points.front() = start;
    path.points.back() = end;
    for (std::size_t k = 1; k + 1 < n; ++k)
        path.points[k] = lerp(start, end, static_cast<double>(k) / static_cast<double>(n - 1));
    return path;
}

FlightPath make_arc_path(const Vec3& start, const Vec3& end, double bulge,
                         ArcPlane plane, std::size_t n, double speed)
{
    if (n < 3)
        throw ValidationError("make_arc_path: need at least 3 waypoints");
    if (!(speed > 0.0))
        throw ValidationError("make_arc_path: speed must be positive");
    const Vec3 chord = end - start;
    const double chord_len = norm(chord);
    if (chord_len == 0.0)
        throw ValidationError("make_arc_path: start and end coincide");
    if (bulge == 0.0)
        throw ValidationError("make_arc_path: bulge must be nonzero (use make_line_path)");
    const double sagitta = std::abs(bulge);
    if (sagitta >= chord_len)
        throw ValidationError("make_arc_path: |bulge| must be smaller than the chord length");

    const Vec3 chord_dir = chord / chord_len;
    Vec3 bow_dir; // unit vector from chord midpoint towards the arc apex
    if (plane == ArcPlane::horizontal) {
        const Vec3 side = cross(chord, Vec3{0.0, 0.0, 1.0});
        const double side_len = norm(side);
        if (side_len < 1e-9 * chord_len)
            throw ValidationError("make_arc_path: chord is vertical, horizontal bow undefined");
        bow_dir = side / side_len * (bulge > 0.0 ? 1.0 : -1.0);
    } else {
        // Component of straight-up perpendicular to the chord.
        const Vec3 up{0.0, 0.0, 1.0};
        const Vec3 perp = up - chord_dir * dot(up, chord_dir);
        const double perp_len = norm(perp);
        if (perp_len < 1e-9)
            throw ValidationError("make_arc_path: chord is vertical, vertical bow undefined");
        bow_dir = perp / perp_len * (bulge > 0.0 ? 1.0 : -1.0);
    }

    // Circle through start, end and apex = midpoint + bow_dir*sagitta:
    // radius from the sagitta relation R = (L^2/4 + s^2) / (2 s).
    const double radius = (chord_len * chord_len / 4.0 + sagitta * sagitta) / (2.0 * sagitta);
    const Vec3 midpoint = lerp(start, end, 0.5);
    const Vec3 centre = midpoint - bow_dir * (radius - sagitta);
    // Half-sweep angle; atan2 handles bows beyond a half circle (s > L/2).
    const double half_angle = std::atan2(chord_len / 2.0, radius - sagitta);

    FlightPath path;
    path.points.resize(n);
    path.speeds.assign(n, speed);
    path.points.front() = start;
    path.points.back() = end;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double phi = -half_angle +
            2.0 * half_angle * static_cast<double>(k) / static_cast<double>(n - 1);
        path.points[k] = centre + (chord_dir * std::sin(phi) + bow_dir * std::cos(phi)) * radius;
    }
    return path;
}

PathTimeline::PathTimeline(const FlightPath& path)
    : points_(path.points)
{
    const std::vector<SegmentKinematics> segs = segment_kinematics(path);
    cumulative_.resize(points_.size());
    velocities_.resize(segs.size());
    cumulative_[0] = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        cumulative_[i + 1] = cumulative_[i] + segs[i].duration;
        velocities_[i] = segs[i].velocity;
    }
}

double PathTimeline::time_at(std::size_t waypoint) const
{
    if (waypoint >= cumulative_.size())
        throw ValidationError("PathTimeline::time_at: waypoint index out of range");
    return cumulative_[waypoint];
}

double PathTimeline::clamp_time(double t) const
{
    const double slack = std::max(kTimeSlack, duration() * kTimeSlack);
    if (t < -slack || t > duration() + slack) {
        std::ostringstream msg;
        msg << "PathTimeline: time " << t << " s outside traversal [0, " << duration() << "] s";
        throw EvaluationError(msg.str());
    }
    return std::clamp(t, 0.0, duration());
}

std::size_t PathTimeline::segment_index(double t) const
{
    // Last waypoint with arrival time <= t; final waypoint maps to the last segment.
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), t);
    std::size_t idx = static_cast<std::size_t>(it - cumulative_.begin());
    idx = idx > 0 ? idx - 1 : 0;
    return std::min(idx, velocities_.size() - 1);
}

Vec3 PathTimeline::position_at(double t) const
{
    const double tc = clamp_time(t);
    const std::size_t i = segment_index(tc);
    return points_[i] + velocities_[i] * (tc - cumulative_[i]);
}

Vec3 PathTimeline::velocity_at(double t) const
{
    return velocities_[segment_index(clamp_time(t))];
}

double PathTimeline::length_between(double t0, double t1) const
{
    double a = clamp_time(t0);
    double b = clamp_time(t1);
    if (a > b)
        std::swap(a, b);
    double len = 0.0;
    for (std::size_t i = 0; i < velocities_.size(); ++i) {
        const double lo = std::max(a, cumulative_[i]);
        const double hi = std::min(b, cumulative_[i + 1]);
        if (hi > lo)
            len += norm(velocities_[i]) * (hi - lo);
    }
    return len;
}

std::size_t PathTimeline::waypoint_before(double t) const
{
    const double tc = clamp_time(t);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), tc);
    const std::size_t idx = static_cast<std::size_t>(it - cumulative_.begin());
    return idx > 0 ? idx - 1 : 0;
}

} // namespace bisar
