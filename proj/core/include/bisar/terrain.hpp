#ifndef BISAR_TERRAIN_HPP
#define BISAR_TERRAIN_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "bisar/vec3.hpp"

namespace bisar {

/// Radial hill profile used by the synthetic terrain generator.
enum class HillProfile {
    cone,     ///< peak * max(0, 1 - d/radius); linear flank, zero at d >= radius
    gaussian, ///< peak * exp(-d^2 / (2 sigma^2)) with sigma = radius/2
};

/// One synthetic hill added on top of the base height.
struct HillSpec {
    double center_x = 0.0;     ///< m
    double center_y = 0.0;     ///< m
    double radius = 0.0;       ///< m, > 0
    double peak_height = 0.0;  ///< m above base, >= 0
    HillProfile profile = HillProfile::cone;
};

/// Analytic height contribution of a single hill at ground point (x, y).
double hill_height(const HillSpec& hill, double x, double y);

/// Regular-grid height field with bilinear interpolation between nodes.
///
/// The grid spans [origin_x, origin_x + (cols-1)*spacing] x
/// [origin_y, origin_y + (rows-1)*spacing]; heights are stored row-major
/// with row 0 at origin_y (south), increasing northward.
class TerrainModel {
public:
    /// Wraps an existing node array. heights.size() must equal rows*cols,
    /// rows and cols must be >= 2, spacing > 0.
    TerrainModel(double origin_x, double origin_y, double spacing,
                 std::size_t cols, std::size_t rows, std::vector<double> heights);

    /// Samples base height plus all hills onto a fresh grid covering
    /// [0, extent_x] x [0, extent_y] (origin at 0,0). Every hill centre must
    /// lie inside that extent. The grid is sized so the footprint covers the
    /// requested extent even when spacing does not divide it evenly.
    static TerrainModel synthesize(double base_height, double extent_x, double extent_y,
                                   double spacing, const std::vector<HillSpec>& hills);

    /// Loads an ASCII grid file: ncols/nrows/xllcorner/yllcorner/cellsize
    /// header lines (any order, case-insensitive), then nrows*ncols heights,
    /// row-major, row 0 at yllcorner.
    static TerrainModel load_ascii_grid(const std::filesystem::path& file);
    static TerrainModel load_ascii_grid(std::istream& in);

    /// Surface height at (x, y) by bilinear interpolation of the four
    /// surrounding nodes. Throws ValidationError outside the footprint.
    double height_at(double x, double y) const;

    /// Vertical clearance p.z - height_at(p.x, p.y); negative underground.
    double clearance(const Vec3& p) const;

    /// True when the straight segment a-b never dips below the surface.
    /// The segment is sampled at symmetric fractions i/n (n chosen from
    /// `step`, default one grid spacing), so the result is exactly symmetric
    /// in a and b. Endpoints are included. step <= 0 selects the default.
    bool line_of_sight(const Vec3& a, const Vec3& b, double step = 0.0) const;

    bool contains(double x, double y) const;

    double origin_x() const { return origin_x_; }
    double origin_y() const { return origin_y_; }
    double max_x() const { return origin_x_ + spacing_ * static_cast<double>(cols_ - 1); }
    double max_y() const { return origin_y_ + spacing_ * static_cast<double>(rows_ - 1); }
    double spacing() const { return spacing_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    /// Node height at grid index (col i, row j); bounds-checked.
    double node(std::size_t i, std::size_t j) const;

    const std::vector<double>& heights() const { return heights_; }

private:
    double origin_x_;
    double origin_y_;
    double spacing_;
    std::size_t cols_;
    std::size_t rows_;
    std::vector<double> heights_; // row-major, heights_[j*cols_ + i]
};

} // namespace bisar

#endif // BISAR_TERRAIN_HPP
