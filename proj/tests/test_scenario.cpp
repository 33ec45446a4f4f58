#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "bisar/errors.hpp"
#include "bisar/mission.hpp"
#include "bisar/scenario.hpp"

using namespace bisar;

namespace {

const std::filesystem::path kScenarioDir = BISAR_SCENARIO_DIR;

// Minimal valid scenario; individual tests mutate single lines.
const char* kMiniScenario = R"json({
  "name": "mini",
  "terrain": { "base_m": 0, "extent_m": [6000, 6000], "spacing_m": 100 },
  "platform": { "mass_kg": 10, "drag_c1": 9.26e-4, "drag_c2": 2250, "v_min_mps": 15, "v_max_mps": 80 },
  "illuminator": { "position_m": [3000, 1000, 3000], "velocity_mps": [0, 0, 0] },
  "radar": { "wavelength_m": 0.12, "bandwidth_hz": 6e7, "prf_hz": 400, "sample_rate_hz": 7.2e7, "aperture_time_s": 1.6 },
  "scene": { "center_m": [3000, 4000], "range_extent_m": 400, "azimuth_extent_m": 400, "samples": 9 },
  "comms": { "bandwidth_hz": 5e6, "tx_power_w": 1, "ref_gain": 1e-4, "noise_power_w": 1e-13, "station_m": [5500, 2000, 10] },
  "threat": { "safe_clearance_m": 200, "sample_step_m": 50, "lateral_probe_m": 80 },
  "route": { "start_km": [1, 2.6, 0.8], "end_km": [5, 2.6, 0.8], "speed_mps": 40 },
  "paths": [ { "name": "p1", "type": "line", "n": 50 } ]
})json";

std::string mutate(const std::string& from, const std::string& to)
{
    std::string text = kMiniScenario;
    const std::size_t pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, from.size(), to);
    return text;
}

std::string error_of(const std::string& json_text)
{
    try {
        parse_scenario(json_text);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

std::vector<std::string> csv_lines(const MissionReport& report)
{
    std::ostringstream out;
    write_report_csv(out, report);
    std::vector<std::string> lines;
    std::istringstream in(out.str());
    std::string line;
    while (std::getline(in, line))
        lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("parse_scenario: minimal scenario and unit conversion")
{
    const ScenarioSpec spec = parse_scenario(kMiniScenario);
    CHECK(spec.name == "mini");
    REQUIRE(spec.paths.size() == 1);
    CHECK(spec.paths[0].name == "p1");
    REQUIRE(spec.paths[0].path.points.size() == 50);
    // Route endpoints were given in km.
    CHECK(spec.paths[0].path.points.front().x == 1000.0);
    CHECK(spec.paths[0].path.points.front().y == 2600.0);
    CHECK(spec.paths[0].path.points.front().z == 800.0);
    CHECK(spec.paths[0].path.points.back().x == 5000.0);
    CHECK(spec.paths[0].path.speeds.front() == 40.0);
    // Scene centre given as 2 components: z derived from the terrain.
    CHECK(spec.scene.center.z == 0.0);
    CHECK(spec.comms.station.x == 5500.0);
    CHECK(spec.platform.v_min == 15.0);
    CHECK(spec.energy.clamp_regeneration == false);
    CHECK(spec.aperture.fixed_time == false);
}

TEST_CASE("parse_scenario: // comments are tolerated")
{
    const std::string with_comment =
        std::string("// mission description\n") + kMiniScenario;
    CHECK(parse_scenario(with_comment).name == "mini");
}

TEST_CASE("parse_scenario: errors carry the offending key path")
{
    CHECK(error_of(mutate("\"mass_kg\": 10, ", "")).find("platform.mass_kg") !=
          std::string::npos);
    CHECK(error_of(mutate("\"threat\": { \"safe_clearance_m\": 200, \"sample_step_m\": 50, "
                          "\"lateral_probe_m\": 80 },",
                          ""))
              .find("threat") != std::string::npos);
    // Both unit variants of one field.
    const std::string both = error_of(
        mutate("\"center_m\": [3000, 4000],", "\"center_m\": [3000, 4000], \"center_km\": [3, 4],"));
    CHECK(both.find("scene.center") != std::string::npos);
    CHECK(both.find("not both") != std::string::npos);
    // Scene centre outside the synthesized footprint.
    const std::string outside =
        error_of(mutate("\"center_m\": [3000, 4000],", "\"center_m\": [9000, 9000],"));
    CHECK(outside.find("scene.center") != std::string::npos);
    CHECK(outside.find("outside") != std::string::npos);
    // Unknown hill profile.
    const std::string hill = error_of(mutate(
        "\"terrain\": { \"base_m\": 0, \"extent_m\": [6000, 6000], \"spacing_m\": 100 },",
        "\"terrain\": { \"base_m\": 0, \"extent_m\": [6000, 6000], \"spacing_m\": 100, "
        "\"hills\": [{ \"center_m\": [3000, 3000], \"radius_m\": 500, \"peak_height_m\": 100, "
        "\"profile\": \"pyramid\" }] },"));
    CHECK(hill.find("pyramid") != std::string::npos);
    // Unknown path type.
    CHECK(error_of(mutate("\"type\": \"line\"", "\"type\": \"spline\""))
              .find("spline") != std::string::npos);
    // Malformed JSON at all.
    CHECK(error_of("{ not json").find("scenario JSON") != std::string::npos);
}

TEST_CASE("parse_scenario: structural validation")
{
    // Duplicate path names.
    const std::string dup = error_of(
        mutate("\"paths\": [ { \"name\": \"p1\", \"type\": \"line\", \"n\": 50 } ]",
               "\"paths\": [ { \"name\": \"p1\", \"type\": \"line\", \"n\": 50 }, "
               "{ \"name\": \"p1\", \"type\": \"line\", \"n\": 60 } ]"));
    CHECK(dup.find("duplicate") != std::string::npos);
    // Waypoint outside the terrain footprint.
    const std::string outside =
        error_of(mutate("\"end_km\": [5, 2.6, 0.8]", "\"end_km\": [7, 2.6, 0.8]"));
    CHECK(outside.find("outside the terrain footprint") != std::string::npos);
    // Ground station outside the footprint.
    const std::string station =
        error_of(mutate("\"station_m\": [5500, 2000, 10]", "\"station_m\": [9500, 2000, 10]"));
    CHECK(station.find("comms.station") != std::string::npos);
}

TEST_CASE("parse_scenario: waypoint paths with per-waypoint speeds")
{
    const std::string wp = mutate(
        "{ \"name\": \"p1\", \"type\": \"line\", \"n\": 50 }",
        "{ \"name\": \"wp\", \"type\": \"waypoints\", "
        "\"points_m\": [[1000, 2600, 800], [1400, 2600, 820], [1800, 2700, 820]], "
        "\"speeds_mps\": [40, 45, 50] }");
    const ScenarioSpec spec = parse_scenario(wp);
    REQUIRE(spec.paths[0].path.points.size() == 3);
    CHECK(spec.paths[0].path.points[1].z == 820.0);
    CHECK(spec.paths[0].path.speeds[2] == 50.0);

    const std::string mismatch = mutate(
        "{ \"name\": \"p1\", \"type\": \"line\", \"n\": 50 }",
        "{ \"name\": \"wp\", \"type\": \"waypoints\", "
        "\"points_m\": [[1000, 2600, 800], [1400, 2600, 820]], \"speeds_mps\": [40] }");
    CHECK(error_of(mismatch).find("speeds_mps") != std::string::npos);
}

TEST_CASE("parse_scenario: fixed-time aperture placement")
{
    const std::string fixed = mutate(
        "\"comms\":",
        "\"aperture\": { \"placement\": \"fixed_time\", \"center_time_s\": 30 },\n  \"comms\":");
    const ScenarioSpec spec = parse_scenario(fixed);
    CHECK(spec.aperture.fixed_time);
    CHECK(spec.aperture.center_time == 30.0);

    const std::string bad = mutate(
        "\"comms\":", "\"aperture\": { \"placement\": \"wherever\" },\n  \"comms\":");
    CHECK(error_of(bad).find("placement") != std::string::npos);
}

TEST_CASE("load_scenario: bundled mission file carries the documented numbers")
{
    const ScenarioSpec s4 = load_scenario(kScenarioDir / "scenario_s4.json");
    CHECK(s4.name == "s4");
    REQUIRE(s4.paths.size() == 4);
    CHECK(s4.paths[0].name == "path1");
    CHECK(s4.paths[1].name == "path2");
    CHECK(s4.paths[2].name == "path3");
    CHECK(s4.paths[3].name == "path4");
    for (const NamedPath& np : s4.paths)
        CHECK(np.path.points.size() == 200);

    // Straight candidate endpoints, km-scaled exactly.
    const FlightPath& straight = s4.paths[3].path;
    CHECK(straight.points.front().x == 3000.0);
    CHECK(straight.points.front().y == 3500.0);
    CHECK(straight.points.front().z == 1500.0);
    CHECK(straight.points.back().x == 15000.0);
    CHECK(straight.points.back().y == 15600.0);
    CHECK(straight.speeds.front() == 50.0);

    CHECK(s4.scene.center.x == 12000.0);
    CHECK(s4.scene.center.y == 16000.0);
    CHECK(s4.scene.center.z == 500.0); // derived from the 500 m plateau
    CHECK(s4.scene.samples == 25);
    CHECK(s4.radar.wavelength == 0.24);
    CHECK(s4.radar.bandwidth == 1.0e8);
    CHECK(s4.radar.prf == 200.0);
    CHECK(s4.radar.sample_rate == 1.2e8);
    CHECK(s4.radar.aperture_time == 4.0);
    CHECK(s4.radar.bits_per_sample == 128);
    CHECK(s4.platform.mass == 10.0);
    CHECK(s4.platform.a_max == 30.0);
    CHECK(s4.energy.clamp_regeneration == true);
    CHECK(s4.comms.station.x == 18000.0);
    CHECK(s4.comms.station.y == 10000.0);
    CHECK(s4.comms.station.z == 720.0);
    CHECK(s4.illuminator.ref_position.y == -24000000.0);
    CHECK(s4.illuminator.ref_velocity.x == 700.0);
    CHECK(s4.threat.safe_clearance == 300.0);

    const ScenarioSpec desk = load_scenario(kScenarioDir / "scenario_desk.json");
    REQUIRE(desk.paths.size() == 1);
    CHECK(desk.paths[0].name == "desk1");
    CHECK(desk.scene.center.z == 0.0);
}

TEST_CASE("find_path: unknown names list the candidates")
{
    const ScenarioSpec s4 = load_scenario(kScenarioDir / "scenario_s4.json");
    CHECK(find_path(s4, "path2").name == "path2");
    try {
        find_path(s4, "nope");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("nope") != std::string::npos);
        CHECK(msg.find("path1") != std::string::npos);
    }
}

TEST_CASE("scenario round trip: serialised copy evaluates to an identical report")
{
    const ScenarioSpec desk = load_scenario(kScenarioDir / "scenario_desk.json");
    const MissionReport direct = evaluate_mission(desk, 1);

    const std::string text = scenario_to_json(desk);
    const ScenarioSpec reparsed = parse_scenario(text);
    const MissionReport roundtrip = evaluate_mission(reparsed, 2);

    std::ostringstream a, b;
    write_report_csv(a, direct);
    write_report_csv(b, roundtrip);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("desk1,") != std::string::npos);

    // And through a file on disk.
    const auto tmp = std::filesystem::temp_directory_path() / "bisar_roundtrip_test.json";
    save_scenario(tmp, desk);
    const MissionReport from_file = evaluate_mission(load_scenario(tmp), 1);
    std::ostringstream c;
    write_report_csv(c, from_file);
    CHECK(a.str() == c.str());
    std::filesystem::remove(tmp);
}

TEST_CASE("evaluate_mission: report rows are independent of sibling paths")
{
    const ScenarioSpec s4 = load_scenario(kScenarioDir / "scenario_s4.json");
    const MissionReport full = evaluate_mission(s4, 2);
    REQUIRE(full.paths.size() == 4);

    ScenarioSpec solo = s4;
    solo.paths = {s4.paths[1]};
    const MissionReport single = evaluate_mission(solo, 1);
    REQUIRE(single.paths.size() == 1);

    const auto full_lines = csv_lines(full);
    const auto solo_lines = csv_lines(single);
    REQUIRE(full_lines.size() == 5);
    REQUIRE(solo_lines.size() == 2);
    CHECK(full_lines[0] == solo_lines[0]); // header
    CHECK(full_lines[2] == solo_lines[1]); // path2 row, byte-identical
}

TEST_CASE("evaluate_mission: a failing path becomes a failed row, not an abort")
{
    const std::string two_paths = mutate(
        "\"paths\": [ { \"name\": \"p1\", \"type\": \"line\", \"n\": 50 } ]",
        "\"paths\": [ { \"name\": \"p1\", \"type\": \"line\", \"n\": 50 }, "
        "{ \"name\": \"crawl\", \"type\": \"line\", \"n\": 50, \"speed_mps\": 5 } ]");
    const ScenarioSpec spec = parse_scenario(two_paths);
    const MissionReport report = evaluate_mission(spec, 2);
    REQUIRE(report.paths.size() == 2);
    CHECK(!report.paths[0].failed);
    CHECK(report.paths[0].feasible ==
          (report.paths[0].link.d_com_bits >= static_cast<double>(report.paths[0].echo.bits)));
    CHECK(report.paths[1].failed);
    CHECK(!report.paths[1].error.empty());

    const auto lines = csv_lines(report);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] ==
          "name,length_m,energy_j,f_threat,sbar_c_m2,diseq_factor,d_echo_bits,d_com_bits,feasible");
    CHECK(lines[2] == "crawl,,,,,,,,0");

    // The human-readable table mentions the failure.
    const std::string table = render_report_table(report);
    CHECK(table.find("crawl") != std::string::npos);
    CHECK(table.find("evaluation failed") != std::string::npos);
}
