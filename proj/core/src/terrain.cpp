#include "bisar/terrain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "bisar/errors.hpp"

namespace bisar {

namespace {

// Small slack for footprint containment so points computed to lie exactly on
// the boundary are not rejected by floating-point noise.
constexpr double kEdgeTolFraction = 1e-9;

} // namespace

double hill_height(const HillSpec& hill, double x, double y)
{
    const double d = std::hypot(x - hill.center_x, y - hill.center_y);
    switch (hill.profile) {
    case HillProfile::cone:
        return hill.peak_height * std::max(0.0, 1.0 - d / hill.radius);
    case HillProfile::gaussian: {
        const double sigma = hill.radius * 0.5;
        return hill.peak_height * std::exp(-d * d / (2.0 * sigma * sigma));
    }
    }
    throw ValidationError("hill_height: unknown profile");
}

TerrainModel::TerrainModel(double origin_x, double origin_y, double spacing,
                           std::size_t cols, std::size_t rows, std::vector<double> heights)
    : origin_x_(origin_x), origin_y_(origin_y), spacing_(spacing),
      cols_(cols), rows_(rows), heights_(std::move(heights))
{
    if (spacing_ <= 0.0)
        throw ValidationError("TerrainModel: spacing must be positive");
    if (cols_ < 2 || rows_ < 2)
        throw ValidationError("TerrainModel: grid needs at least 2x2 nodes");
    if (heights_.size() != cols_ * rows_)
        throw ValidationError("TerrainModel: height count does not match grid size");
    for (double h : heights_) {
        if (!std::isfinite(h))
            throw ValidationError("TerrainModel: non-finite height value");
    }
}

TerrainModel TerrainModel::synthesize(double base_height, double extent_x, double extent_y,
                                      double spacing, const std::vector<HillSpec>& hills)
{
    if (extent_x <= 0.0 || extent_y <= 0.0)
        throw ValidationError("synthesize: terrain extent must be positive");
    if (spacing <= 0.0)
        throw ValidationError("synthesize: grid spacing must be positive");
    for (const HillSpec& hill : hills) {
        if (hill.radius <= 0.0)
            throw ValidationError("synthesize: hill radius must be positive");
        if (hill.peak_height < 0.0)
            throw ValidationError("synthesize: hill peak height must be non-negative");
        if (hill.center_x < 0.0 || hill.center_x > extent_x ||
            hill.center_y < 0.0 || hill.center_y > extent_y)
            throw ValidationError("synthesize: hill centre outside terrain extent");
    }

    // ceil so the footprint always covers the requested extent.
    const std::size_t cols = static_cast<std::size_t>(std::ceil(extent_x / spacing - 1e-9)) + 1;
    const std::size_t rows = static_cast<std::size_t>(std::ceil(extent_y / spacing - 1e-9)) + 1;

    std::vector<double> heights(cols * rows, base_height);
    for (std::size_t j = 0; j < rows; ++j) {
        const double y = spacing * static_cast<double>(j);
        for (std::size_t i = 0; i < cols; ++i) {
            const double x = spacing * static_cast<double>(i);
            double h = base_height;
            for (const HillSpec& hill : hills)
                h += hill_height(hill, x, y);
            heights[j * cols + i] = h;
        }
    }
    return TerrainModel(0.0, 0.0, spacing, cols, rows, std::move(heights));
}

TerrainModel TerrainModel::load_ascii_grid(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw ValidationError("load_ascii_grid: cannot open '" + file.string() + "'");
    return load_ascii_grid(in);
}

TerrainModel TerrainModel::load_ascii_grid(std::istream& in)
{
    // Header: five "key value" lines in any order.
    std::map<std::string, double> header;
    for (int line = 0; line < 5; ++line) {
        std::string key;
        double value = 0.0;
        if (!(in >> key >> value))
            throw ValidationError("load_ascii_grid: truncated header");
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        header[key] = value;
    }
    for (const char* required : {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize"}) {
        if (header.find(required) == header.end())
            throw ValidationError(std::string("load_ascii_grid: missing header field '") +
                                  required + "'");
    }
    const double ncols_raw = header["ncols"];
    const double nrows_raw = header["nrows"];
    if (ncols_raw < 2.0 || nrows_raw < 2.0 ||
        ncols_raw != std::floor(ncols_raw) || nrows_raw != std::floor(nrows_raw))
        throw ValidationError("load_ascii_grid: ncols/nrows must be integers >= 2");
    const std::size_t cols = static_cast<std::size_t>(ncols_raw);
    const std::size_t rows = static_cast<std::size_t>(nrows_raw);

    std::vector<double> heights(cols * rows);
    for (std::size_t k = 0; k < heights.size(); ++k) {
        if (!(in >> heights[k]))
            throw ValidationError("load_ascii_grid: expected " + std::to_string(heights.size()) +
                                  " height values, file ended at " + std::to_string(k));
    }
    return TerrainModel(header["xllcorner"], header["yllcorner"], header["cellsize"],
                        cols, rows, std::move(heights));
}

bool TerrainModel::contains(double x, double y) const
{
    const double tol = spacing_ * kEdgeTolFraction;
    return x >= origin_x_ - tol && x <= max_x() + tol &&
           y >= origin_y_ - tol && y <= max_y() + tol;
}

double TerrainModel::node(std::size_t i, std::size_t j) const
{
    if (i >= cols_ || j >= rows_)
        throw ValidationError("TerrainModel::node: index out of range");
    return heights_[j * cols_ + i];
}

double TerrainModel::height_at(double x, double y) const
{
    if (!contains(x, y)) {
        std::ostringstream msg;
        msg << "height_at: point (" << x << ", " << y << ") outside terrain footprint ["
            << origin_x_ << ", " << max_x() << "] x [" << origin_y_ << ", " << max_y() << "]";
        throw ValidationError(msg.str());
    }
    const double fx = (x - origin_x_) / spacing_;
    const double fy = (y - origin_y_) / spacing_;
    // Clamp so boundary queries fall into the last cell instead of past it.
    const std::size_t i = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(fx))), cols_ - 2);
    const std::size_t j = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(fy))), rows_ - 2);
    const double u = std::clamp(fx - static_cast<double>(i), 0.0, 1.0);
    const double v = std::clamp(fy - static_cast<double>(j), 0.0, 1.0);

    const double h00 = heights_[j * cols_ + i];
    const double h10 = heights_[j * cols_ + i + 1];
    const double h01 = heights_[(j + 1) * cols_ + i];
    const double h11 = heights_[(j + 1) * cols_ + i + 1];
    return (1.0 - u) * (1.0 - v) * h00 + u * (1.0 - v) * h10 +
           (1.0 - u) * v * h01 + u * v * h11;
}

double TerrainModel::clearance(const Vec3& p) const
{
    return p.z - height_at(p.x, p.y);
}

bool TerrainModel::line_of_sight(const Vec3& a, const Vec3& b, double step) const
{
    const double len = distance(a, b);
    if (step <= 0.0)
        step = spacing_;
    // Symmetric sample fractions i/n, i = 0..n: swapping a and b visits the
    // same set of points, so LOS(a,b) == LOS(b,a) exactly.
    const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / step)));
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n);
        if (clearance(lerp(a, b, t)) < 0.0)
            return false;
    }
    return true;
}

} // namespace bisar
