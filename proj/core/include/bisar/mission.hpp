#ifndef BISAR_MISSION_HPP
#define BISAR_MISSION_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bisar/comms.hpp"
#include "bisar/echosim.hpp"
#include "bisar/energy.hpp"
#include "bisar/sargeom.hpp"
#include "bisar/scenario.hpp"
#include "bisar/threat.hpp"

namespace bisar {

/// Evaluation outcome of one candidate path. When `failed` is set only
/// `name` and `error` are meaningful.
struct PathReport {
    std::string name;
    bool failed = false;
    std::string error;

    double length_m = 0.0;
    EnergyBreakdown energy;
    double peak_accel = 0.0;
    ThreatResult threat;
    ApertureWindow window;
    SceneResolution resolution;
    EchoDataSize echo;
    LinkBudgetReport link;
    double los_fraction = 1.0;

    double margin_bits = 0.0; ///< d_com - d_echo
    bool feasible = false;    ///< d_com >= d_echo
    std::vector<std::string> warnings;
};

struct MissionReport {
    std::string scenario_name;
    std::vector<PathReport> paths; ///< scenario order, one row per candidate
};

/// Evaluates every candidate path of the scenario: length, energy, threat,
/// aperture placement, scene resolution score, echo volume, link budget,
/// line-of-sight sanity and feasibility. Paths are independent rows and may
/// be evaluated in parallel; results are identical for any `jobs`. A path
/// whose evaluation throws EvaluationError becomes a failed row instead of
/// aborting the mission.
MissionReport evaluate_mission(const ScenarioSpec& spec, int jobs = 1);

/// Machine-readable report: header plus one row per path,
///   name,length_m,energy_j,f_threat,sbar_c_m2,diseq_factor,d_echo_bits,
///   d_com_bits,feasible
/// Floats are printed with %.9g so repeated runs are byte-identical;
/// feasible is 1/0; failed rows leave the numeric fields empty.
void write_report_csv(std::ostream& out, const MissionReport& report);

/// Human-readable summary table with units, warnings and failures.
std::string render_report_table(const MissionReport& report);

} // namespace bisar

#endif // BISAR_MISSION_HPP
