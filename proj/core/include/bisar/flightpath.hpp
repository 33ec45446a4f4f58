#ifndef BISAR_FLIGHTPATH_HPP
#define BISAR_FLIGHTPATH_HPP

#include <cstddef>
#include <vector>

#include "bisar/vec3.hpp"

namespace bisar {

/// Piecewise-linear flight path: waypoints plus the commanded speed at each
/// waypoint. points.size() == speeds.size() >= 2, speeds > 0, consecutive
/// waypoints distinct.
struct FlightPath {
    std::vector<Vec3> points;
    std::vector<double> speeds; // m/s, one per waypoint
};

/// Throws ValidationError when the path violates its invariants.
void validate(const FlightPath& path);

/// Per-segment kinematics derived from the waypoint list. Segment i runs
/// from waypoint i to waypoint i+1.
struct SegmentKinematics {
    Vec3 velocity;      ///< mean velocity over the segment (m/s)
    Vec3 acceleration;  ///< finite-difference acceleration (m/s^2)
    double duration;    ///< traversal time (s)
    double climb;       ///< altitude change z_{i+1} - z_i (m)
};

/// Segment traversal uses the mean of the endpoint speeds:
/// duration = |P_{i+1} - P_i| / ((s_i + s_{i+1})/2).
/// Acceleration comes from waypoint tangent velocities: at interior waypoints
/// the tangent direction is the normalised average of the two adjacent
/// segment directions (one-sided at the ends), scaled by the waypoint speed;
/// segment acceleration is (v_{i+1} - v_i) / duration.
std::vector<SegmentKinematics> segment_kinematics(const FlightPath& path);

/// Sum of segment lengths (m).
double path_length(const FlightPath& path);

/// Sum of segment durations (s).
double total_duration(const FlightPath& path);

/// Straight path from start to end with n evenly spaced waypoints, constant
/// speed. n >= 2; start != end; speed > 0.
FlightPath make_line_path(const Vec3& start, const Vec3& end, std::size_t n, double speed);

enum class ArcPlane {
    horizontal, ///< bow sideways: bulge along unit(chord x z-up)
    vertical,   ///< bow upward: bulge along +z
};

/// Circular arc from start to end bowing out by `bulge` metres at the chord
/// midpoint, sampled with n waypoints at constant speed. The arc lies in the
/// plane spanned by the chord and the bulge direction; |bulge| must be
/// positive and smaller than the chord length (larger would be a
/// more-than-semicircular bow, rejected). For ArcPlane::horizontal a negative
/// bulge bows to the opposite side. n >= 3.
FlightPath make_arc_path(const Vec3& start, const Vec3& end, double bulge,
                         ArcPlane plane, std::size_t n, double speed);

/// Maps traversal time to position/velocity along a path.
class PathTimeline {
public:
    explicit PathTimeline(const FlightPath& path);

    double duration() const { return cumulative_.back(); }

    /// Traversal time at which waypoint i is reached.
    double time_at(std::size_t waypoint) const;

    /// Position at traversal time t in [0, duration]; linear within segments.
    /// Times outside the range by more than a small slack throw
    /// EvaluationError; boundary noise is clamped.
    Vec3 position_at(double t) const;

    /// Mean velocity of the segment active at time t.
    Vec3 velocity_at(double t) const;

    /// Arc length traversed between times t0 <= t1 (m).
    double length_between(double t0, double t1) const;

    /// Index of the last waypoint reached at or before time t.
    std::size_t waypoint_before(double t) const;

private:
    std::size_t segment_index(double t) const;
    double clamp_time(double t) const;

    std::vector<Vec3> points_;
    std::vector<double> cumulative_; // cumulative_[i] = arrival time at waypoint i
    std::vector<Vec3> velocities_;   // per segment
};

} // namespace bisar

#endif // BISAR_FLIGHTPATH_HPP
