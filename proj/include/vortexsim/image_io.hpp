#ifndef VORTEXSIM_IMAGE_IO_HPP
#define VORTEXSIM_IMAGE_IO_HPP

#include "vortexsim/binary_mask.hpp"
#include "vortexsim/field.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace vortexsim
{

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place, so a failed write never leaves a partial file behind. Throws
/// IoError naming the path.
void writeFileAtomic(const std::string& path, std::string_view bytes);

/// Whole file as bytes. Throws IoError.
std::string readFile(const std::string& path);

/// Portable float map: 1 (Pf) or 3 (PF) float32 channels, rows stored
/// bottom to top, little endian on disk.
struct PfmImage
{
  std::size_t width = 0;
  std::size_t height = 0;
  int channels = 1;
  std::vector<float> data; ///< row-major from the bottom row, channels interleaved
};

std::string encodePfm(const PfmImage& image);
/// Throws IoError for a malformed header or truncated data.
PfmImage decodePfm(std::string_view bytes, const std::string& pathForErrors = "<memory>");

void writePfm(const std::string& path, const PfmImage& image);
PfmImage readPfm(const std::string& path);

/// Single-channel map of a real plane.
void writeRealPfm(const std::string& path, const RealField& field);
/// Three channels: real part, imaginary part, 0.
void writeComplexPfm(const std::string& path, const ComplexField& field);
/// Reads a map written by writeComplexPfm (or a single-channel map as a
/// real field) onto `grid`. Throws ShapeError when the size differs.
ComplexField readComplexPfm(const std::string& path, const GridSpec& grid);

enum class FieldFormat
{
  Pfm, ///< complex samples, float32
  Pgm, ///< 8-bit intensity quick-look
};

/// write_field: PFM keeps the complex samples; PGM is an 8-bit intensity
/// preview scaled to the maximum.
void writeField(const ComplexField& field, const std::string& path, FieldFormat format);

/// 8-bit greyscale of `field` mapped linearly from [lo, hi] to [0, 255],
/// written top row first.
void writePgm(const std::string& path, const RealField& field, double lo, double hi);

/// Binary PBM (P4); open pixels are white (bit 0), written top row first.
void writeMask(const BinaryMask& mask, const std::string& path);

/// Dimensions and open flags of a PBM, bottom row first.
struct PbmImage
{
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> open;
};
PbmImage readPbm(const std::string& path);

/// Comma-separated table with a one-line header.
struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};

void writeCsv(const std::string& path, const CsvTable& table);

/// Shortest decimal that parses back to the same double.
std::string formatNumber(double value);

} // namespace vortexsim

#endif
