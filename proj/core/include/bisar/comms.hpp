#ifndef BISAR_COMMS_HPP
#define BISAR_COMMS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "bisar/flightpath.hpp"
#include "bisar/terrain.hpp"
#include "bisar/vec3.hpp"

namespace bisar {

/// Restricts downlink transmission to segments [first, last).
struct CommWindow {
    std::size_t first_segment = 0;
    std::size_t last_segment = 0; ///< one past the last transmitting segment
};

struct CommParams {
    double bandwidth = 1.0e7;    ///< B_com (Hz)
    double tx_power = 1.0;       ///< P_com (W)
    double ref_gain = 1.0e-4;    ///< beta_0: channel gain at 1 m
    double noise_power = 1.0e-13;///< sigma^2 (W)
    Vec3 station;                ///< ground-station position (m)
    std::optional<CommWindow> window; ///< transmit everywhere when absent
};

/// Shannon capacity of one segment (bits):
///   T * B_com * log2(1 + P_com beta_0 / (sigma^2 l^2)).
double segment_capacity(double duration, double distance, const CommParams& params);

struct SegmentRate {
    double duration = 0.0;  ///< s
    double distance = 0.0;  ///< midpoint-to-station range l(i) (m)
    double rate = 0.0;      ///< instantaneous rate (bit/s)
};

struct LinkBudgetReport {
    double d_com_bits = 0.0;              ///< total deliverable volume
    std::vector<SegmentRate> per_segment; ///< one entry per transmitting segment
};

/// Total downlink volume over the path: each segment contributes its
/// duration times the Shannon rate at its midpoint distance. Summation is
/// compensated (Kahan) so the result does not depend on how callers batch
/// paths. Segment distances use the 3-D midpoint-to-station range.
LinkBudgetReport path_capacity(const FlightPath& path, const CommParams& params);

/// Duration-weighted fraction of transmit time with terrain line of sight
/// from the segment midpoint to the station, in [0, 1]. A value below 1
/// flags the free-space capacity as optimistic.
double check_los_assumption(const FlightPath& path, const CommParams& params,
                            const TerrainModel& terrain);

} // namespace bisar

#endif // BISAR_COMMS_HPP
