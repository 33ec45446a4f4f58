// End-to-end smoke tests for the bisar command-line tool.
//
// Each case shells out to the real binary (path injected via BISAR_CLI),
// captures stdout/stderr into a scratch directory, and checks exit codes,
// file artifacts, and the documented output formats.

#include <doctest.h>

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef _WIN32
#include <sys/wait.h>
#include <unistd.h>
#endif

#include "bisar/image_io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kDeskScenario =
    (fs::path(BISAR_SCENARIO_DIR) / "scenario_desk.json").string();

// Scratch directory, removed on scope exit. Unique per test case so cases
// cannot see each other's artifacts.
struct TempDir {
    fs::path path;

    TempDir()
    {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("bisar_cli_" + std::to_string(static_cast<long>(::getpid())) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const char* name) const { return (path / name).string(); }
};

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& file)
{
    std::ifstream in(file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_lines(const std::string& text)
{
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        lines.push_back(line);
    return lines;
}

std::size_t count_occurrences(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

// Run `bisar <args>`, capturing stdout and stderr through the scratch dir.
CliResult run_cli(const std::string& args, const TempDir& tmp)
{
    const std::string out_file = tmp.file("cli_stdout.txt");
    const std::string err_file = tmp.file("cli_stderr.txt");
    const std::string cmd = std::string("\"") + BISAR_CLI + "\" " + args + " >\"" +
                            out_file + "\" 2>\"" + err_file + "\"";
    const int status = std::system(cmd.c_str());

    CliResult r;
#ifdef _WIN32
    r.exit_code = status;
#else
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#endif
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

// The desk scenario shape, but with a cruise speed below the platform's
// stall floor: parsing succeeds, evaluation of the path fails.
const char* kCrawlScenario = R"json({
  "name": "crawl-case",
  "terrain": { "base_m": 0, "extent_m": [6000, 6000], "spacing_m": 100 },
  "platform": { "mass_kg": 10, "drag_c1": 9.26e-4, "drag_c2": 2250, "v_min_mps": 15, "v_max_mps": 80 },
  "illuminator": { "position_m": [3000, 1000, 3000], "velocity_mps": [0, 0, 0] },
  "radar": { "wavelength_m": 0.12, "bandwidth_hz": 6e7, "prf_hz": 400, "sample_rate_hz": 7.2e7, "aperture_time_s": 1.6 },
  "scene": { "center_m": [3000, 4000], "range_extent_m": 400, "azimuth_extent_m": 400, "samples": 9 },
  "comms": { "bandwidth_hz": 5e6, "tx_power_w": 1, "ref_gain": 1e-4, "noise_power_w": 1e-13, "station_m": [5500, 2000, 10] },
  "threat": { "safe_clearance_m": 200, "sample_step_m": 50, "lateral_probe_m": 80 },
  "route": { "start_km": [1, 2.6, 0.8], "end_km": [5, 2.6, 0.8], "speed_mps": 5 },
  "paths": [ { "name": "crawl", "type": "line", "n": 50 } ]
})json";

const char* kReportHeader =
    "name,length_m,energy_j,f_threat,sbar_c_m2,diseq_factor,d_echo_bits,d_com_bits,feasible";

} // namespace

TEST_CASE("cli: --help exits 0 and names every subcommand")
{
    TempDir tmp;
    const CliResult r = run_cli("--help", tmp);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("evaluate") != std::string::npos);
    CHECK(r.out.find("resolution-map") != std::string::npos);
    CHECK(r.out.find("image") != std::string::npos);
    CHECK(r.out.find("verify") != std::string::npos);
}

TEST_CASE("cli: evaluate writes the report CSV")
{
    TempDir tmp;
    const std::string csv = tmp.file("report.csv");
    const CliResult r =
        run_cli("evaluate \"" + kDeskScenario + "\" --quiet -o \"" + csv + "\"", tmp);
    CHECK(r.exit_code == 0);
    CHECK(r.err.empty()); // --quiet suppresses the table

    const std::vector<std::string> lines = split_lines(slurp(csv));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == kReportHeader);
    CHECK(lines[1].rfind("desk1,", 0) == 0);
    // Last column: feasibility flag must be 0 or 1.
    const char last = lines[1].back();
    CHECK((last == '0' || last == '1'));
}

TEST_CASE("cli: evaluate defaults to CSV on stdout, table on stderr")
{
    TempDir tmp;
    const CliResult r = run_cli("evaluate \"" + kDeskScenario + "\"", tmp);
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind(kReportHeader, 0) == 0);
    CHECK(r.err.find("desk1") != std::string::npos); // human-readable table
}

TEST_CASE("cli: evaluate is deterministic across --jobs")
{
    TempDir tmp;
    const std::string csv1 = tmp.file("jobs1.csv");
    const std::string csv2 = tmp.file("jobs2.csv");
    CHECK(run_cli("evaluate \"" + kDeskScenario + "\" --quiet --jobs 1 -o \"" + csv1 + "\"",
                  tmp)
              .exit_code == 0);
    CHECK(run_cli("evaluate \"" + kDeskScenario + "\" --quiet --jobs 2 -o \"" + csv2 + "\"",
                  tmp)
              .exit_code == 0);
    const std::string a = slurp(csv1);
    const std::string b = slurp(csv2);
    CHECK(!a.empty());
    CHECK(a == b);
}

TEST_CASE("cli: a missing scenario file exits 2 with a JSON error line")
{
    TempDir tmp;
    const CliResult r =
        run_cli("evaluate \"" + tmp.file("no_such_scenario.json") + "\" --quiet", tmp);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("{\"error\": \"validation\"") != std::string::npos);
}

TEST_CASE("cli: resolution-map emits one row per scene sample")
{
    TempDir tmp;
    const std::string csv = tmp.file("map.csv");
    const CliResult r = run_cli(
        "resolution-map \"" + kDeskScenario + "\" --path desk1 -o \"" + csv + "\"", tmp);
    CHECK(r.exit_code == 0);
    CHECK(r.err.find("sbar_c_m2") != std::string::npos);

    const std::vector<std::string> lines = split_lines(slurp(csv));
    REQUIRE(lines.size() == 26); // header + 25 scene samples (desk default)
    CHECK(lines[0] == "x_m,y_m,rho_r_m,rho_a_m,psi_rad,s_c_m2");
    // Every data row has 6 comma-separated fields.
    for (std::size_t i = 1; i < lines.size(); ++i)
        CHECK(count_occurrences(lines[i], ",") == 5);
}

TEST_CASE("cli: resolution-map with an unknown path exits 2 and lists names")
{
    TempDir tmp;
    const CliResult r =
        run_cli("resolution-map \"" + kDeskScenario + "\" --path bogus", tmp);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("{\"error\": \"validation\"") != std::string::npos);
    CHECK(r.err.find("bogus") != std::string::npos);
    CHECK(r.err.find("desk1") != std::string::npos);
}

TEST_CASE("cli: image writes a readable binary image and optional dB CSV")
{
    TempDir tmp;
    const std::string psim = tmp.file("img.psim");
    const std::string csv = tmp.file("img.csv");
    const CliResult r = run_cli("image \"" + kDeskScenario + "\" --path desk1 --targets 9 -o \"" +
                                    psim + "\" --csv \"" + csv + "\"",
                                tmp);
    CHECK(r.exit_code == 0);
    CHECK(r.err.find("wrote") != std::string::npos);

    const bisar::ComplexImage image = bisar::read_image(psim);
    REQUIRE(image.grid.n_x == image.grid.n_y);
    CHECK(image.grid.n_x % 2 == 1);      // grid is centred on the reference target
    CHECK(image.grid.n_x >= 21);
    CHECK(image.grid.spacing > 0.0);

    // The reference point target sits at the exact grid centre; the focused
    // peak must land there (within a pixel) with near-unit magnitude.
    std::size_t best_x = 0;
    std::size_t best_y = 0;
    double best = -1.0;
    for (std::size_t iy = 0; iy < image.grid.n_y; ++iy) {
        for (std::size_t ix = 0; ix < image.grid.n_x; ++ix) {
            const double a = std::abs(image.at(ix, iy));
            if (a > best) {
                best = a;
                best_x = ix;
                best_y = iy;
            }
        }
    }
    const std::size_t centre = image.grid.n_x / 2;
    CHECK(best_x >= centre - 1);
    CHECK(best_x <= centre + 1);
    CHECK(best_y >= centre - 1);
    CHECK(best_y <= centre + 1);
    CHECK(best > 0.5);
    CHECK(best < 1.5);

    const std::vector<std::string> lines = split_lines(slurp(csv));
    REQUIRE(lines.size() == 1 + image.grid.n_x * image.grid.n_y);
    CHECK(lines[0] == "x_m,y_m,amp_db");
}

TEST_CASE("cli: verify prints one comparison line per role")
{
    TempDir tmp;
    const CliResult r =
        run_cli("verify \"" + kDeskScenario + "\" --path desk1 --targets 9", tmp);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("Ref.") != std::string::npos);
    CHECK(r.out.find("Min.") != std::string::npos);
    CHECK(r.out.find("Max.") != std::string::npos);
    REQUIRE(count_occurrences(r.out, "ratio = ") == 3);

    // Measured-over-predicted cell areas must be close to 1.
    std::size_t pos = 0;
    while ((pos = r.out.find("ratio = ", pos)) != std::string::npos) {
        pos += 8;
        const double ratio = std::strtod(r.out.c_str() + pos, nullptr);
        CHECK(ratio > 0.7);
        CHECK(ratio < 1.3);
    }
}

TEST_CASE("cli: usage errors exit 2")
{
    TempDir tmp;
    // Unknown subcommand.
    CHECK(run_cli("frobnicate", tmp).exit_code == 2);
    // Missing required --path option.
    CHECK(run_cli("resolution-map \"" + kDeskScenario + "\"", tmp).exit_code == 2);
    // No subcommand at all.
    CHECK(run_cli("", tmp).exit_code == 2);
}

TEST_CASE("cli: a failing path evaluation exits 1 but still writes the CSV")
{
    TempDir tmp;
    const std::string scenario = tmp.file("crawl.json");
    {
        std::ofstream out(scenario);
        out << kCrawlScenario;
    }
    const std::string csv = tmp.file("crawl.csv");
    const CliResult r =
        run_cli("evaluate \"" + scenario + "\" --quiet -o \"" + csv + "\"", tmp);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("{\"error\": \"evaluation\"") != std::string::npos);
    CHECK(r.err.find("crawl") != std::string::npos);

    const std::vector<std::string> lines = split_lines(slurp(csv));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == kReportHeader);
    CHECK(lines[1] == "crawl,,,,,,,,0");
}
