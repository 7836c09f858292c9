#include "vortexsim/image_io.hpp"

#include "vortexsim/errors.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace vortexsim
{

namespace fs = std::filesystem;

namespace
{

std::uint32_t toLittleEndian(std::uint32_t v)
{
  if constexpr (std::endian::native == std::endian::big)
    return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
  return v;
}

/// Parses the whitespace-separated header tokens of a netpbm file and
/// returns the offset of the first data byte.
std::size_t parseHeader(std::string_view bytes, std::size_t tokens, std::vector<std::string>& out,
                        const std::string& path)
{
  std::size_t pos = 0;
  while (out.size() < tokens) {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos])))
      ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n')
        ++pos;
      continue;
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])))
      ++pos;
    if (start == pos)
      throw IoError("'" + path + "': truncated image header");
    out.emplace_back(bytes.substr(start, pos - start));
  }
  if (pos >= bytes.size())
    throw IoError("'" + path + "': missing image data");
  return pos + 1; // single whitespace byte ends the header
}

std::size_t parseDimension(const std::string& token, const std::string& path)
{
  try {
    std::size_t used = 0;
    const long long v = std::stoll(token, &used);
    if (used != token.size() || v <= 0)
      throw std::invalid_argument(token);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw IoError("'" + path + "': bad image dimension '" + token + "'");
  }
}

} // namespace

void writeFileAtomic(const std::string& path, std::string_view bytes)
{
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("write to '" + path + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move temporary file into '" + path + "': " + ec.message());
  }
}

std::string readFile(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad())
    throw IoError("read from '" + path + "' failed");
  return buffer.str();
}

std::string encodePfm(const PfmImage& image)
{
  if (image.channels != 1 && image.channels != 3)
    throw ShapeError("PFM images have 1 or 3 channels");
  if (image.data.size() != image.width * image.height * static_cast<std::size_t>(image.channels))
    throw ShapeError("PFM data size does not match its dimensions");
  std::string out = (image.channels == 3 ? "PF\n" : "Pf\n") + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n-1.0\n";
  const std::size_t headerSize = out.size();
  out.resize(headerSize + image.data.size() * 4);
  char* dst = out.data() + headerSize;
  for (float f : image.data) {
    const std::uint32_t bits = toLittleEndian(std::bit_cast<std::uint32_t>(f));
    std::memcpy(dst, &bits, 4);
    dst += 4;
  }
  return out;
}

PfmImage decodePfm(std::string_view bytes, const std::string& path)
{
  std::vector<std::string> tokens;
  const std::size_t offset = parseHeader(bytes, 4, tokens, path);
  PfmImage image;
  if (tokens[0] == "PF")
    image.channels = 3;
  else if (tokens[0] == "Pf")
    image.channels = 1;
  else
    throw IoError("'" + path + "': not a PFM file");
  image.width = parseDimension(tokens[1], path);
  image.height = parseDimension(tokens[2], path);
  double scale = 0.0;
  try {
    scale = std::stod(tokens[3]);
  } catch (const std::exception&) {
    throw IoError("'" + path + "': bad PFM scale '" + tokens[3] + "'");
  }
  if (scale == 0.0)
    throw IoError("'" + path + "': PFM scale must be nonzero");
  const bool little = scale < 0.0;

  const std::size_t count = image.width * image.height * static_cast<std::size_t>(image.channels);
  if (bytes.size() - offset < count * 4)
    throw IoError("'" + path + "': truncated PFM data");
  image.data.resize(count);
  const char* src = bytes.data() + offset;
  for (std::size_t k = 0; k < count; ++k, src += 4) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, src, 4);
    const bool swap = little != (std::endian::native == std::endian::little);
    if (swap)
      bits = ((bits & 0xffu) << 24) | ((bits & 0xff00u) << 8) | ((bits >> 8) & 0xff00u) | (bits >> 24);
    image.data[k] = std::bit_cast<float>(bits);
  }
  return image;
}

void writePfm(const std::string& path, const PfmImage& image)
{
  writeFileAtomic(path, encodePfm(image));
}

PfmImage readPfm(const std::string& path)
{
  return decodePfm(readFile(path), path);
}

void writeRealPfm(const std::string& path, const RealField& field)
{
  PfmImage image{field.grid.nx, field.grid.ny, 1, {}};
  image.data.assign(field.values.begin(), field.values.end());
  writePfm(path, image);
}

void writeComplexPfm(const std::string& path, const ComplexField& field)
{
  PfmImage image{field.grid().nx, field.grid().ny, 3, {}};
  image.data.reserve(field.values().size() * 3);
  for (const Complex& c : field.values()) {
    image.data.push_back(static_cast<float>(c.real()));
    image.data.push_back(static_cast<float>(c.imag()));
    image.data.push_back(0.0f);
  }
  writePfm(path, image);
}

ComplexField readComplexPfm(const std::string& path, const GridSpec& grid)
{
  const PfmImage image = readPfm(path);
  if (image.width != grid.nx || image.height != grid.ny)
    throw ShapeError("'" + path + "' is " + std::to_string(image.width) + "x" +
                     std::to_string(image.height) + ", expected " + std::to_string(grid.nx) + "x" +
                     std::to_string(grid.ny));
  std::vector<Complex> values(grid.size());
  const auto stride = static_cast<std::size_t>(image.channels);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double re = image.data[k * stride];
    const double im = image.channels == 3 ? image.data[k * stride + 1] : 0.0;
    values[k] = Complex(re, im);
  }
  return ComplexField(grid, std::move(values));
}

void writePgm(const std::string& path, const RealField& field, double lo, double hi)
{
  const std::size_t nx = field.grid.nx;
  const std::size_t ny = field.grid.ny;
  std::string out = "P5\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
  const std::size_t headerSize = out.size();
  out.resize(headerSize + nx * ny);
  const double span = hi > lo ? hi - lo : 1.0;
  char* dst = out.data() + headerSize;
  for (std::size_t row = 0; row < ny; ++row) {
    const std::size_t j = ny - 1 - row;
    for (std::size_t i = 0; i < nx; ++i) {
      const double t = std::clamp((field.at(i, j) - lo) / span, 0.0, 1.0);
      *dst++ = static_cast<char>(static_cast<unsigned char>(std::lround(t * 255.0)));
    }
  }
  writeFileAtomic(path, out);
}

void writeField(const ComplexField& field, const std::string& path, FieldFormat format)
{
  if (format == FieldFormat::Pfm) {
    writeComplexPfm(path, field);
    return;
  }
  const RealField inten = intensity(field);
  const double peak = inten.values.empty() ? 0.0 : *std::max_element(inten.values.begin(), inten.values.end());
  writePgm(path, inten, 0.0, peak);
}

void writeMask(const BinaryMask& mask, const std::string& path)
{
  const GridSpec& g = mask.grid();
  const std::size_t rowBytes = (g.nx + 7) / 8;
  std::string out = "P4\n" + std::to_string(g.nx) + " " + std::to_string(g.ny) + "\n";
  const std::size_t headerSize = out.size();
  out.resize(headerSize + rowBytes * g.ny, '\0');
  for (std::size_t row = 0; row < g.ny; ++row) {
    const std::size_t j = g.ny - 1 - row;
    auto* dst = reinterpret_cast<unsigned char*>(out.data() + headerSize + row * rowBytes);
    for (std::size_t i = 0; i < g.nx; ++i)
      if (!mask.open(i, j))
        dst[i / 8] |= static_cast<unsigned char>(0x80u >> (i % 8));
  }
  writeFileAtomic(path, out);
}

PbmImage readPbm(const std::string& path)
{
  const std::string bytes = readFile(path);
  std::vector<std::string> tokens;
  const std::size_t offset = parseHeader(bytes, 3, tokens, path);
  if (tokens[0] != "P4")
    throw IoError("'" + path + "': not a binary PBM file");
  PbmImage image;
  image.width = parseDimension(tokens[1], path);
  image.height = parseDimension(tokens[2], path);
  const std::size_t rowBytes = (image.width + 7) / 8;
  if (bytes.size() - offset < rowBytes * image.height)
    throw IoError("'" + path + "': truncated PBM data");
  image.open.resize(image.width * image.height);
  for (std::size_t row = 0; row < image.height; ++row) {
    const std::size_t j = image.height - 1 - row;
    const auto* src = reinterpret_cast<const unsigned char*>(bytes.data() + offset + row * rowBytes);
    for (std::size_t i = 0; i < image.width; ++i)
      image.open[j * image.width + i] = (src[i / 8] & (0x80u >> (i % 8))) ? 0 : 1;
  }
  return image;
}

std::string CsvTable::str() const
{
  auto line = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k)
        s += ',';
      s += cells[k];
    }
    s += '\n';
    return s;
  };
  std::string out = line(header);
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw ShapeError("CSV row has " + std::to_string(row.size()) + " cells, header has " +
                       std::to_string(header.size()));
    out += line(row);
  }
  return out;
}

void writeCsv(const std::string& path, const CsvTable& table)
{
  writeFileAtomic(path, table.str());
}

std::string formatNumber(double value)
{
  if (!std::isfinite(value))
    return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc{} ? end : buf);
}

} // namespace vortexsim
