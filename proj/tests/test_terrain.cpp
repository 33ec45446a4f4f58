#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bisar/errors.hpp"
#include "bisar/terrain.hpp"

using namespace bisar;

namespace {

// Two-hill test terrain: 20 km x 20 km plateau at 500 m.
TerrainModel two_hill_terrain()
{
    return TerrainModel::synthesize(
        500.0, 20000.0, 20000.0, 50.0,
        {HillSpec{7000.0, 7000.0, 2000.0, 900.0, HillProfile::cone},
         HillSpec{18000.0, 10000.0, 1000.0, 200.0, HillProfile::cone}});
}

} // namespace

TEST_CASE("hill_height: cone profile")
{
    const HillSpec hill{7000.0, 7000.0, 2000.0, 900.0, HillProfile::cone};
    CHECK(hill_height(hill, 7000.0, 7000.0) == doctest::Approx(900.0));
    CHECK(hill_height(hill, 8000.0, 7000.0) == doctest::Approx(450.0));
    CHECK(hill_height(hill, 9000.0, 7000.0) == 0.0);    // exactly at the radius
    CHECK(hill_height(hill, 15000.0, 7000.0) == 0.0);   // far outside
    // Continuity across the rim.
    CHECK(hill_height(hill, 8999.9, 7000.0) == doctest::Approx(0.045).epsilon(1e-6));
}

TEST_CASE("hill_height: gaussian profile")
{
    const HillSpec hill{0.0, 0.0, 1000.0, 400.0, HillProfile::gaussian};
    CHECK(hill_height(hill, 0.0, 0.0) == doctest::Approx(400.0));
    // sigma = radius/2, so the value at one radius is peak * exp(-2).
    CHECK(hill_height(hill, 1000.0, 0.0) == doctest::Approx(400.0 * std::exp(-2.0)));
}

TEST_CASE("synthesize: hill peak lands on the grid")
{
    const TerrainModel terrain = two_hill_terrain();
    CHECK(terrain.height_at(7000.0, 7000.0) == doctest::Approx(1400.0));
    CHECK(terrain.height_at(18000.0, 10000.0) == doctest::Approx(700.0));
    CHECK(terrain.height_at(1000.0, 19000.0) == doctest::Approx(500.0)); // plateau
    CHECK(terrain.spacing() == 50.0);
    CHECK(terrain.cols() == 401);
    CHECK(terrain.rows() == 401);
    CHECK(terrain.max_x() == doctest::Approx(20000.0));
}

TEST_CASE("synthesize: validation")
{
    CHECK_THROWS_AS(TerrainModel::synthesize(0.0, -1.0, 100.0, 10.0, {}), ValidationError);
    CHECK_THROWS_AS(TerrainModel::synthesize(0.0, 100.0, 100.0, 0.0, {}), ValidationError);
    // Hill centre outside the extent.
    CHECK_THROWS_AS(TerrainModel::synthesize(
                        0.0, 100.0, 100.0, 10.0,
                        {HillSpec{500.0, 50.0, 10.0, 5.0, HillProfile::cone}}),
                    ValidationError);
    CHECK_THROWS_AS(TerrainModel::synthesize(
                        0.0, 100.0, 100.0, 10.0,
                        {HillSpec{50.0, 50.0, -1.0, 5.0, HillProfile::cone}}),
                    ValidationError);
}

TEST_CASE("height_at: bilinear interpolation")
{
    // Single cell with south corners at 0 and north corners at 10.
    const TerrainModel cell(0.0, 0.0, 10.0, 2, 2, {0.0, 0.0, 10.0, 10.0});
    CHECK(cell.height_at(5.0, 5.0) == doctest::Approx(5.0));
    CHECK(cell.height_at(0.0, 0.0) == 0.0);   // node-exact
    CHECK(cell.height_at(10.0, 10.0) == 10.0); // far corner, boundary query
    CHECK(cell.height_at(3.0, 0.0) == doctest::Approx(0.0));
    CHECK(cell.height_at(7.0, 10.0) == doctest::Approx(10.0));

    // Interpolated value never leaves the hull of the four corner nodes.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int k = 0; k < 200; ++k) {
        const double h = cell.height_at(u(rng), u(rng));
        CHECK(h >= 0.0);
        CHECK(h <= 10.0);
    }
}

TEST_CASE("height_at: matches the analytic cone within one cell of slope")
{
    const TerrainModel terrain = two_hill_terrain();
    const HillSpec hill{7000.0, 7000.0, 2000.0, 900.0, HillProfile::cone};
    // Bilinear error is bounded by the surface variation across one cell:
    // Lipschitz constant (peak/radius) times the cell diagonal.
    const double bound = 900.0 / 2000.0 * 50.0 * std::sqrt(2.0);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1900.0, 1900.0);
    for (int k = 0; k < 500; ++k) {
        const double x = 7000.0 + u(rng);
        const double y = 7000.0 + u(rng);
        const double analytic = 500.0 + hill_height(hill, x, y);
        CHECK(std::abs(terrain.height_at(x, y) - analytic) <= bound);
    }
}

TEST_CASE("height_at: outside the footprint throws")
{
    const TerrainModel terrain = two_hill_terrain();
    CHECK_THROWS_AS(terrain.height_at(-1.0, 5000.0), ValidationError);
    CHECK_THROWS_AS(terrain.height_at(5000.0, 20001.0), ValidationError);
    CHECK(terrain.contains(0.0, 0.0));
    CHECK(terrain.contains(20000.0, 20000.0));
    CHECK(!terrain.contains(20001.0, 0.0));
}

TEST_CASE("clearance: height plus clearance recovers the query altitude")
{
    const TerrainModel terrain = two_hill_terrain();
    CHECK(terrain.clearance(Vec3{1000.0, 1000.0, 1500.0}) == doctest::Approx(1000.0));
    CHECK(terrain.clearance(Vec3{7000.0, 7000.0, 1500.0}) == doctest::Approx(100.0));
    CHECK(terrain.clearance(Vec3{7000.0, 7000.0, 1400.0}) == doctest::Approx(0.0));
    CHECK(terrain.clearance(Vec3{7000.0, 7000.0, 1000.0}) < 0.0); // underground

    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0.0, 20000.0);
    std::uniform_real_distribution<double> uz(0.0, 3000.0);
    for (int k = 0; k < 200; ++k) {
        const Vec3 p{u(rng), u(rng), uz(rng)};
        CHECK(terrain.clearance(p) + terrain.height_at(p.x, p.y) == doctest::Approx(p.z));
    }
}

TEST_CASE("line_of_sight: hills block, open terrain does not")
{
    const TerrainModel terrain = two_hill_terrain();
    // High route over the plateau.
    CHECK(terrain.line_of_sight(Vec3{1000.0, 1000.0, 2000.0}, Vec3{19000.0, 1000.0, 2000.0}));
    // Ray through the 1400 m hill at 600 m altitude.
    CHECK(!terrain.line_of_sight(Vec3{5000.0, 7000.0, 600.0}, Vec3{9000.0, 7000.0, 600.0}));
    // Same endpoints lifted over the summit.
    CHECK(terrain.line_of_sight(Vec3{5000.0, 7000.0, 1500.0}, Vec3{9000.0, 7000.0, 1500.0}));
    // Degenerate segment: above ground is visible, below ground is not.
    CHECK(terrain.line_of_sight(Vec3{5000.0, 5000.0, 600.0}, Vec3{5000.0, 5000.0, 600.0}));
    CHECK(!terrain.line_of_sight(Vec3{7000.0, 7000.0, 900.0}, Vec3{7000.0, 7000.0, 900.0}));
}

TEST_CASE("line_of_sight: symmetric in its endpoints")
{
    const TerrainModel terrain = two_hill_terrain();
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.0, 20000.0);
    std::uniform_real_distribution<double> uz(400.0, 2500.0);
    for (int k = 0; k < 100; ++k) {
        const Vec3 a{u(rng), u(rng), uz(rng)};
        const Vec3 b{u(rng), u(rng), uz(rng)};
        CHECK(terrain.line_of_sight(a, b) == terrain.line_of_sight(b, a));
    }
}

TEST_CASE("load_ascii_grid: round numbers and header order")
{
    std::istringstream file(
        "nrows 2\n"
        "ncols 3\n"
        "cellsize 25.0\n"
        "xllcorner 100.0\n"
        "yllcorner -50.0\n"
        "1 2 3\n"
        "4 5 6\n");
    const TerrainModel t = TerrainModel::load_ascii_grid(file);
    CHECK(t.cols() == 3);
    CHECK(t.rows() == 2);
    CHECK(t.spacing() == 25.0);
    CHECK(t.origin_x() == 100.0);
    CHECK(t.origin_y() == -50.0);
    CHECK(t.node(0, 0) == 1.0);
    CHECK(t.node(2, 0) == 3.0);
    CHECK(t.node(0, 1) == 4.0); // row 1 is the northern row
    CHECK(t.height_at(112.5, -37.5) == doctest::Approx(3.0));
}

TEST_CASE("load_ascii_grid: malformed input throws")
{
    std::istringstream missing_header("ncols 2\nnrows 2\ncellsize 10\n1 2 3 4\n");
    CHECK_THROWS_AS(TerrainModel::load_ascii_grid(missing_header), ValidationError);

    std::istringstream truncated(
        "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 10\n1 2 3\n");
    CHECK_THROWS_AS(TerrainModel::load_ascii_grid(truncated), ValidationError);

    std::istringstream bad_dims(
        "ncols 1\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 10\n1 2\n");
    CHECK_THROWS_AS(TerrainModel::load_ascii_grid(bad_dims), ValidationError);
}

TEST_CASE("TerrainModel: constructor validation")
{
    CHECK_THROWS_AS(TerrainModel(0.0, 0.0, 10.0, 2, 2, {1.0, 2.0, 3.0}), ValidationError);
    CHECK_THROWS_AS(TerrainModel(0.0, 0.0, -1.0, 2, 2, {1.0, 2.0, 3.0, 4.0}), ValidationError);
    CHECK_THROWS_AS(TerrainModel(0.0, 0.0, 10.0, 1, 4, {1.0, 2.0, 3.0, 4.0}), ValidationError);
    const double nan = std::nan("");
    CHECK_THROWS_AS(TerrainModel(0.0, 0.0, 10.0, 2, 2, {1.0, nan, 3.0, 4.0}), ValidationError);
}
