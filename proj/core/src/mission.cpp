#include "bisar/mission.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "bisar/errors.hpp"
#include "bisar/parallel.hpp"

namespace bisar {

namespace {

// Fixed float formatting for byte-stable CSV output (locale-independent).
std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

PathReport evaluate_path(const ScenarioSpec& spec, const NamedPath& named)
{
    PathReport r;
    r.name = named.name;
    const FlightPath& path = named.path;

    r.length_m = path_length(path);
    r.energy = path_energy(path, spec.platform, spec.energy);
    r.peak_accel = peak_acceleration(path);
    if (r.peak_accel > spec.platform.a_max) {
        std::ostringstream w;
        w << "peak acceleration " << r.peak_accel << " m/s^2 exceeds a_max "
          << spec.platform.a_max << " m/s^2";
        r.warnings.push_back(w.str());
    }

    r.threat = path_threat(path, spec.terrain, spec.threat);
    if (r.threat.collision)
        r.warnings.push_back("path intersects the terrain");

    r.window = spec.aperture.fixed_time
        ? place_aperture_window_at(path, spec.aperture.center_time, spec.radar)
        : place_aperture_window(path, spec.scene, spec.radar);
    r.resolution = scene_resolution(spec.illuminator, path, r.window, spec.scene, spec.radar);
    r.echo = echo_data_size(spec.illuminator, path, r.window, spec.scene, spec.radar);

    r.link = path_capacity(path, spec.comms);
    r.los_fraction = check_los_assumption(path, spec.comms, spec.terrain);
    if (r.los_fraction < 1.0) {
        std::ostringstream w;
        w << "station line of sight only " << num(100.0 * r.los_fraction)
          << "% of transmit time; free-space capacity is optimistic";
        r.warnings.push_back(w.str());
    }

    r.margin_bits = r.link.d_com_bits - static_cast<double>(r.echo.bits);
    r.feasible = r.margin_bits >= 0.0;
    return r;
}

} // namespace

MissionReport evaluate_mission(const ScenarioSpec& spec, int jobs)
{
    validate_scenario(spec);
    MissionReport report;
    report.scenario_name = spec.name;
    report.paths.resize(spec.paths.size());

    // Rows are disjoint outputs, so parallel evaluation stays deterministic.
    parallel_for(0, spec.paths.size(), jobs, [&](std::size_t i) {
        try {
            report.paths[i] = evaluate_path(spec, spec.paths[i]);
        } catch (const EvaluationError& e) {
            report.paths[i] = PathReport{};
            report.paths[i].name = spec.paths[i].name;
            report.paths[i].failed = true;
            report.paths[i].error = e.what();
        }
    });
    return report;
}

void write_report_csv(std::ostream& out, const MissionReport& report)
{
    out << "name,length_m,energy_j,f_threat,sbar_c_m2,diseq_factor,d_echo_bits,d_com_bits,"
           "feasible\n";
    for (const PathReport& p : report.paths) {
        if (p.failed) {
            out << p.name << ",,,,,,,,0\n";
            continue;
        }
        out << p.name << ',' << num(p.length_m) << ',' << num(p.energy.total) << ','
            << num(p.threat.value) << ',' << num(p.resolution.sbar_c) << ','
            << num(p.resolution.disequilibrium) << ',' << p.echo.bits << ','
            << num(p.link.d_com_bits) << ',' << (p.feasible ? '1' : '0') << '\n';
    }
}

std::string render_report_table(const MissionReport& report)
{
    std::ostringstream out;
    out << "scenario: " << report.scenario_name << " (" << report.paths.size()
        << (report.paths.size() == 1 ? " path)\n" : " paths)\n");

    const char* fmt = "%-10s %10s %11s %10s %9s %11s %7s %12s %12s %9s\n";
    char line[256];
    std::snprintf(line, sizeof line, fmt, "path", "length_km", "energy_kJ", "energy_Wh",
                  "f_threat", "Sbar_c_m2", "diseq", "D_echo_Mbit", "D_com_Mbit", "feasible");
    out << line;

    const auto cell = [](double v, const char* f) {
        char buf[32];
        std::snprintf(buf, sizeof buf, f, v);
        return std::string(buf);
    };
    for (const PathReport& p : report.paths) {
        if (p.failed) {
            std::snprintf(line, sizeof line, "%-10s evaluation failed: %s\n", p.name.c_str(),
                          p.error.c_str());
            out << line;
            continue;
        }
        std::snprintf(line, sizeof line, fmt, p.name.c_str(),
                      cell(p.length_m / 1000.0, "%.3f").c_str(),
                      cell(p.energy.total / 1000.0, "%.2f").c_str(),
                      cell(p.energy.total / 3600.0, "%.2f").c_str(),
                      cell(p.threat.value, "%.4f").c_str(),
                      cell(p.resolution.sbar_c, "%.3f").c_str(),
                      cell(p.resolution.disequilibrium, "%.3f").c_str(),
                      cell(static_cast<double>(p.echo.bits) / 1.0e6, "%.1f").c_str(),
                      cell(p.link.d_com_bits / 1.0e6, "%.1f").c_str(),
                      p.feasible ? "yes" : "no");
        out << line;
    }

    bool any_notes = false;
    for (const PathReport& p : report.paths) {
        for (const std::string& w : p.warnings) {
            if (!any_notes) {
                out << "warnings:\n";
                any_notes = true;
            }
            out << "  " << p.name << ": " << w << '\n';
        }
    }
    return out.str();
}

} // namespace bisar
