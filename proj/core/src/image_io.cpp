#include "bisar/image_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>

#include "bisar/errors.hpp"

namespace bisar {

namespace {

static_assert(std::endian::native == std::endian::little,
              "PSIM I/O assumes a little-endian host");

constexpr char kMagic[4] = {'P', 'S', 'I', 'M'};

void put_u32(std::ostream& out, std::uint32_t v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f32(std::ostream& out, float v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in)
{
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

float get_f32(std::istream& in)
{
    float v = 0.0f;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

} // namespace

void write_image(std::ostream& out, const ComplexImage& image)
{
    if (image.data.size() != image.grid.n_x * image.grid.n_y)
        throw ValidationError("write_image: pixel count does not match grid dimensions");
    out.write(kMagic, sizeof kMagic);
    put_u32(out, static_cast<std::uint32_t>(image.grid.n_x));
    put_u32(out, static_cast<std::uint32_t>(image.grid.n_y));
    put_f32(out, static_cast<float>(image.grid.spacing));
    for (const std::complex<double>& z : image.data) {
        put_f32(out, static_cast<float>(z.real()));
        put_f32(out, static_cast<float>(z.imag()));
    }
    if (!out)
        throw EvaluationError("write_image: stream write failed");
}

void write_image(const std::filesystem::path& file, const ComplexImage& image)
{
    std::ofstream out(file, std::ios::binary);
    if (!out)
        throw ValidationError("write_image: cannot open '" + file.string() + "'");
    write_image(out, image);
}

ComplexImage read_image(std::istream& in)
{
    char magic[4] = {};
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw ValidationError("read_image: not a PSIM image (bad magic)");

    ComplexImage image;
    image.grid.n_x = get_u32(in);
    image.grid.n_y = get_u32(in);
    image.grid.spacing = static_cast<double>(get_f32(in));
    if (!in || image.grid.n_x == 0 || image.grid.n_y == 0 || image.grid.spacing <= 0.0)
        throw ValidationError("read_image: malformed PSIM header");

    image.data.resize(image.grid.n_x * image.grid.n_y);
    for (std::complex<double>& z : image.data) {
        const float re = get_f32(in);
        const float im = get_f32(in);
        z = {static_cast<double>(re), static_cast<double>(im)};
    }
    if (!in)
        throw ValidationError("read_image: truncated pixel payload");
    return image;
}

ComplexImage read_image(const std::filesystem::path& file)
{
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw ValidationError("read_image: cannot open '" + file.string() + "'");
    return read_image(in);
}

void write_image_db_csv(std::ostream& out, const ComplexImage& image)
{
    double peak = 0.0;
    for (const std::complex<double>& z : image.data)
        peak = std::max(peak, std::abs(z));
    if (peak <= 0.0)
        peak = 1.0;

    out << "x_m,y_m,amp_db\n";
    char line[128];
    for (std::size_t j = 0; j < image.grid.n_y; ++j) {
        for (std::size_t i = 0; i < image.grid.n_x; ++i) {
            const Vec3 p = image.pixel_position(static_cast<double>(i), static_cast<double>(j));
            const double amp = std::abs(image.at(i, j)) / peak;
            const double db = amp > 0.0 ? std::max(-120.0, 20.0 * std::log10(amp)) : -120.0;
            std::snprintf(line, sizeof line, "%.9g,%.9g,%.9g\n", p.x, p.y, db);
            out << line;
        }
    }
}

} // namespace bisar
