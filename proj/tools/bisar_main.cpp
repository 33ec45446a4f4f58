// bisar: mission-evaluation CLI for passive bistatic-SAR UAV path planning.
//
// Subcommands:
//   evaluate       score every candidate path of a scenario (CSV + table)
//   resolution-map dump the per-sample resolution grid of one path
//   image          simulate point-target echoes and backproject an image
//   verify         compare measured vs predicted resolution cells
//
// Exit codes: 0 success, 1 evaluation failure, 2 usage/validation error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bisar/echosim.hpp"
#include "bisar/errors.hpp"
#include "bisar/image_io.hpp"
#include "bisar/mission.hpp"
#include "bisar/scenario.hpp"

namespace {

using namespace bisar;

// Machine-readable error line on stderr: kind + message as a JSON object.
void report_error(const char* kind, const std::string& message)
{
    std::string escaped;
    escaped.reserve(message.size());
    for (char c : message) {
        if (c == '"' || c == '\\')
            escaped += '\\';
        if (c == '\n') {
            escaped += "\\n";
            continue;
        }
        escaped += c;
    }
    std::cerr << "{\"error\": \"" << kind << "\", \"message\": \"" << escaped << "\"}\n";
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::ofstream open_output(const std::string& file)
{
    std::ofstream out(file);
    if (!out)
        throw ValidationError("cannot open output file '" + file + "'");
    return out;
}

int run_evaluate(const std::string& scenario_file, const std::string& csv_file, int jobs,
                 bool quiet)
{
    const ScenarioSpec spec = load_scenario(scenario_file);
    const MissionReport report = evaluate_mission(spec, jobs);

    if (!csv_file.empty()) {
        std::ofstream out = open_output(csv_file);
        write_report_csv(out, report);
    } else {
        write_report_csv(std::cout, report);
    }
    if (!quiet)
        std::cerr << render_report_table(report);

    for (const PathReport& p : report.paths) {
        if (p.failed) {
            report_error("evaluation", "path '" + p.name + "': " + p.error);
            return 1;
        }
    }
    return 0;
}

int run_resolution_map(const std::string& scenario_file, const std::string& path_name,
                       const std::string& csv_file)
{
    const ScenarioSpec spec = load_scenario(scenario_file);
    const NamedPath& named = find_path(spec, path_name);

    const ApertureWindow window = spec.aperture.fixed_time
        ? place_aperture_window_at(named.path, spec.aperture.center_time, spec.radar)
        : place_aperture_window(named.path, spec.scene, spec.radar);
    const SceneResolution res =
        scene_resolution(spec.illuminator, named.path, window, spec.scene, spec.radar);

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!csv_file.empty()) {
        file = open_output(csv_file);
        out = &file;
    }
    *out << "x_m,y_m,rho_r_m,rho_a_m,psi_rad,s_c_m2\n";
    for (const ResolutionSample& s : res.samples) {
        *out << format_double(s.target.x) << ',' << format_double(s.target.y) << ','
             << format_double(s.rho_r) << ',' << format_double(s.rho_a) << ','
             << format_double(s.psi) << ',' << format_double(s.cell_area) << '\n';
    }
    std::cerr << "sbar_c_m2 = " << format_double(res.sbar_c)
              << ", diseq_factor = " << format_double(res.disequilibrium) << '\n';
    return 0;
}

// Shared by `image` and `verify`: scene targets, window and predictions.
struct ImagingSetup {
    ApertureWindow window;
    SceneSpec scene;
};

ImagingSetup make_setup(const ScenarioSpec& spec, const FlightPath& path, int targets)
{
    ImagingSetup setup{
        spec.aperture.fixed_time
            ? place_aperture_window_at(path, spec.aperture.center_time, spec.radar)
            : place_aperture_window(path, spec.scene, spec.radar),
        spec.scene,
    };
    if (targets > 0)
        setup.scene.samples = static_cast<std::size_t>(targets);
    return setup;
}

int run_image(const std::string& scenario_file, const std::string& path_name, int targets,
              const std::string& out_file, const std::string& csv_file, int jobs)
{
    const ScenarioSpec spec = load_scenario(scenario_file);
    const NamedPath& named = find_path(spec, path_name);
    const ImagingSetup setup = make_setup(spec, named.path, targets);

    // Image the reference (scene-centre) target's neighbourhood: fine enough
    // to resolve the point response, sized from the predicted cell.
    const SceneResolution res = scene_resolution(spec.illuminator, named.path, setup.window,
                                                 setup.scene, spec.radar);
    const std::vector<Vec3> grid_points = scene_sample_grid(setup.scene);
    std::size_t ref_idx = 0;
    double ref_d2 = norm2(grid_points[0] - setup.scene.center);
    for (std::size_t i = 1; i < grid_points.size(); ++i) {
        const double d2 = norm2(grid_points[i] - setup.scene.center);
        if (d2 < ref_d2) {
            ref_d2 = d2;
            ref_idx = i;
        }
    }
    const ResolutionSample& pred = res.samples[ref_idx];
    const double spacing = std::min(pred.rho_r, pred.rho_a) / 10.0;
    const double half = 6.0 * std::max(pred.rho_r, pred.rho_a);
    const std::size_t half_px = static_cast<std::size_t>(std::llround(half / spacing));

    ImageGrid grid;
    grid.spacing = spacing;
    grid.n_x = 2 * half_px + 1;
    grid.n_y = 2 * half_px + 1;
    grid.origin = Vec3{pred.target.x - static_cast<double>(half_px) * spacing,
                       pred.target.y - static_cast<double>(half_px) * spacing, pred.target.z};

    std::vector<PointTarget> point_targets;
    for (const Vec3& p : scene_sample_grid(setup.scene))
        point_targets.push_back(PointTarget{p, 1.0});
    const EchoMatrix echo = simulate_echo(point_targets, spec.illuminator, named.path,
                                          setup.window, spec.radar, {}, jobs);
    const ComplexImage image =
        backproject(echo, grid, spec.illuminator, named.path, spec.radar, jobs);

    write_image(out_file, image);
    std::cerr << "wrote " << out_file << " (" << grid.n_x << "x" << grid.n_y
              << " px, spacing " << format_double(spacing) << " m, "
              << point_targets.size() << " targets)\n";
    if (!csv_file.empty()) {
        std::ofstream csv = open_output(csv_file);
        write_image_db_csv(csv, image);
        std::cerr << "wrote " << csv_file << '\n';
    }
    return 0;
}

int run_verify(const std::string& scenario_file, const std::string& path_name, int targets,
               int jobs)
{
    const ScenarioSpec spec = load_scenario(scenario_file);
    const NamedPath& named = find_path(spec, path_name);
    const ImagingSetup setup = make_setup(spec, named.path, targets);

    const std::vector<ResolutionCheck> checks = verify_resolution(
        spec.illuminator, named.path, setup.window, setup.scene, spec.radar,
        VerifyOptions{10.0, 6.0, jobs});

    const auto role_name = [](TargetRole role) {
        switch (role) {
        case TargetRole::reference: return "Ref.";
        case TargetRole::min_cell: return "Min.";
        case TargetRole::max_cell: return "Max.";
        }
        return "?";
    };
    for (const ResolutionCheck& c : checks) {
        std::printf("%-4s target (%.1f, %.1f) m: predicted S_c = %.4g m^2, "
                    "measured = %.4g m^2, ratio = %.3f "
                    "(rho_r %.3f->%.3f m, rho_a %.3f->%.3f m, PSLR %.1f dB)\n",
                    role_name(c.role), c.predicted.target.x, c.predicted.target.y,
                    c.predicted.cell_area, c.measured.cell_area, c.area_ratio,
                    c.predicted.rho_r, c.measured.rho_r, c.predicted.rho_a, c.measured.rho_a,
                    c.measured.pslr_db);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mission evaluator for passive bistatic-SAR UAV paths"};
    app.require_subcommand(1);
    // Global flags (--jobs, --seed) may appear after the subcommand.
    app.fallthrough();

    int jobs = 1;
    unsigned long long seed = 0;
    app.add_option("--jobs", jobs, "Worker threads (results are identical for any value)")
        ->capture_default_str();
    app.add_option("--seed", seed,
                   "Random seed for stochastic placement (reserved; all bundled "
                   "evaluators are deterministic)");

    std::string scenario_file;
    std::string path_name;
    std::string out_file;
    std::string csv_file;
    int targets = 0;
    bool quiet = false;

    CLI::App* evaluate = app.add_subcommand("evaluate", "Score every candidate path");
    evaluate->add_option("scenario", scenario_file, "Scenario file")->required();
    evaluate->add_option("-o,--out", csv_file, "Write the report CSV here (default: stdout)");
    evaluate->add_flag("--quiet", quiet, "Suppress the human-readable table (stderr)");

    CLI::App* resmap = app.add_subcommand("resolution-map",
                                          "Dump the per-sample resolution grid of one path");
    resmap->add_option("scenario", scenario_file, "Scenario file")->required();
    resmap->add_option("--path", path_name, "Path name")->required();
    resmap->add_option("-o,--out", csv_file, "Write the CSV here (default: stdout)");

    CLI::App* image = app.add_subcommand("image",
                                         "Backproject a point-target image around the scene "
                                         "centre");
    image->add_option("scenario", scenario_file, "Scenario file")->required();
    image->add_option("--path", path_name, "Path name")->required();
    image->add_option("--targets", targets, "Point-target count (perfect square; default: "
                                            "scene samples)");
    image->add_option("-o,--out", out_file, "Output image file")->default_val("image.psim");
    image->add_option("--csv", csv_file, "Also write the image magnitude as dB CSV");

    CLI::App* verify = app.add_subcommand("verify",
                                          "Measure resolution cells against predictions");
    verify->add_option("scenario", scenario_file, "Scenario file")->required();
    verify->add_option("--path", path_name, "Path name")->required();
    verify->add_option("--targets", targets, "Point-target count (perfect square; default: "
                                             "scene samples)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        if (evaluate->parsed())
            return run_evaluate(scenario_file, csv_file, jobs, quiet);
        if (resmap->parsed())
            return run_resolution_map(scenario_file, path_name, csv_file);
        if (image->parsed())
            return run_image(scenario_file, path_name, targets, out_file, csv_file, jobs);
        if (verify->parsed())
            return run_verify(scenario_file, path_name, targets, jobs);
    } catch (const ValidationError& e) {
        report_error("validation", e.what());
        return 2;
    } catch (const EvaluationError& e) {
        report_error("evaluation", e.what());
        return 1;
    } catch (const std::exception& e) {
        report_error("internal", e.what());
        return 1;
    }
    return 2;
}
