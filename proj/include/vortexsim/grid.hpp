#ifndef VORTEXSIM_GRID_HPP
#define VORTEXSIM_GRID_HPP

#include <cstddef>

namespace vortexsim
{

/// A point in a sampled plane, in meters.
struct Point
{
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Sampling of a square-pixel plane.
///
/// Pixel (i, j) sits at x = (i - nx/2) * pitch, y = (j - ny/2) * pitch, so the
/// origin is a pixel center, x grows with i and y grows with j (rows are
/// stored bottom to top). Every module shares this convention; azimuth is
/// atan2(y, x).
struct GridSpec
{
  std::size_t nx = 0;
  std::size_t ny = 0;
  double pitch = 0.0;      ///< meters per pixel
  double wavelength = 0.0; ///< meters

  /// Throws DomainError unless nx, ny >= 16 and pitch, wavelength > 0.
  void validate() const;

  std::size_t size() const { return nx * ny; }
  double extentX() const { return static_cast<double>(nx) * pitch; }
  double extentY() const { return static_cast<double>(ny) * pitch; }
  double pixelArea() const { return pitch * pitch; }

  double x(std::size_t i) const
  {
    return (static_cast<double>(i) - static_cast<double>(nx / 2)) * pitch;
  }
  double y(std::size_t j) const
  {
    return (static_cast<double>(j) - static_cast<double>(ny / 2)) * pitch;
  }
  /// Fractional column index of the coordinate x.
  double column(double xm) const { return xm / pitch + static_cast<double>(nx / 2); }
  /// Fractional row index of the coordinate y.
  double row(double ym) const { return ym / pitch + static_cast<double>(ny / 2); }

  std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }

  /// Smallest and largest sampled coordinates.
  double xMin() const { return x(0); }
  double xMax() const { return x(nx - 1); }
  double yMin() const { return y(0); }
  double yMax() const { return y(ny - 1); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

} // namespace vortexsim

#endif
