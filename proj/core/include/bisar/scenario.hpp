#ifndef BISAR_SCENARIO_HPP
#define BISAR_SCENARIO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "bisar/comms.hpp"
#include "bisar/energy.hpp"
#include "bisar/flightpath.hpp"
#include "bisar/sargeom.hpp"
#include "bisar/terrain.hpp"
#include "bisar/threat.hpp"

namespace bisar {

struct NamedPath {
    std::string name;
    FlightPath path;
};

/// Where the synthetic-aperture window sits on each path.
struct AperturePlacement {
    bool fixed_time = false;   ///< false: centre on the waypoint nearest the scene
    double center_time = 0.0;  ///< used when fixed_time is true (s)
};

/// A complete mission-evaluation problem: environment, platform, radar,
/// downlink and the candidate flight paths.
struct ScenarioSpec {
    explicit ScenarioSpec(TerrainModel terrain_model) : terrain(std::move(terrain_model)) {}

    std::string name;
    TerrainModel terrain;
    PlatformParams platform;
    EnergyOptions energy;
    IlluminatorTrajectory illuminator;
    RadarParams radar;
    SceneSpec scene;
    AperturePlacement aperture;
    CommParams comms;
    ThreatParams threat;
    std::vector<NamedPath> paths;
};

/// Parses a scenario from JSON text. Geometry keys accept either
/// `<name>_km` or `<name>_m`; `base_dir` anchors relative terrain grid-file
/// references. Structural problems throw ValidationError with the offending
/// key path in the message.
ScenarioSpec parse_scenario(const std::string& json_text,
                            const std::filesystem::path& base_dir = {});

/// Loads and parses a scenario file.
ScenarioSpec load_scenario(const std::filesystem::path& file);

/// Serialises a scenario to JSON text (metre keys, terrain inlined as a
/// grid) such that parse_scenario(scenario_to_json(s)) evaluates to an
/// identical mission report.
std::string scenario_to_json(const ScenarioSpec& spec);

void save_scenario(const std::filesystem::path& file, const ScenarioSpec& spec);

/// Cross-field consistency checks (unique path names, station inside the
/// terrain footprint, positive radar/comm parameters, ...). parse_scenario
/// runs this automatically.
void validate_scenario(const ScenarioSpec& spec);

/// Looks up a path by name; the error lists the available names.
const NamedPath& find_path(const ScenarioSpec& spec, const std::string& name);

} // namespace bisar

#endif // BISAR_SCENARIO_HPP
