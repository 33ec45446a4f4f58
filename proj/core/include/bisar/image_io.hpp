#ifndef BISAR_IMAGE_IO_HPP
#define BISAR_IMAGE_IO_HPP

#include <filesystem>
#include <iosfwd>

#include "bisar/echosim.hpp"

namespace bisar {

/// Writes a complex image in the PSIM binary layout: 16-byte little-endian
/// header (magic "PSIM", uint32 n_x, uint32 n_y, float32 pixel spacing in
/// metres) followed by row-major interleaved float32 (re, im) pairs. The
/// grid origin is not stored.
void write_image(const std::filesystem::path& file, const ComplexImage& image);
void write_image(std::ostream& out, const ComplexImage& image);

/// Reads a PSIM file; the returned grid origin is zero.
ComplexImage read_image(const std::filesystem::path& file);
ComplexImage read_image(std::istream& in);

/// Writes the image magnitude as CSV: header "x_m,y_m,amp_db", one row per
/// pixel (row-major), amplitudes in dB relative to the image peak; pixels
/// more than 120 dB down are clamped to -120.
void write_image_db_csv(std::ostream& out, const ComplexImage& image);

} // namespace bisar

#endif // BISAR_IMAGE_IO_HPP
