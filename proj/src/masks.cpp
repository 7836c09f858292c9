#include "vortexsim/masks.hpp"

#include "vortexsim/errors.hpp"
#include "vortexsim/parallel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace vortexsim
{

namespace
{

// sin(pi x) and cos(pi x) that are exact at integer and half-integer x.
double sinPi(double x)
{
  double r = std::fmod(x, 2.0); // exact
  if (r < 0.0)
    r += 2.0;
  if (r == 0.0 || r == 1.0)
    return 0.0;
  if (r == 0.5)
    return 1.0;
  if (r == 1.5)
    return -1.0;
  return std::sin(std::numbers::pi * r);
}

double cosPi(double x)
{
  return sinPi(x + 0.5);
}

void checkDuty(double duty)
{
  if (!(duty > 0.0 && duty < 1.0))
    throw DomainError("duty cycle must lie in (0, 1)");
}

template <typename OpenTest>
BinaryMask renderDisk(const GridSpec& grid, Point center, double radius, OpenTest isOpen)
{
  std::vector<std::uint8_t> open(grid.size());
  std::vector<std::uint8_t> aperture(grid.size());
  parallelRows(grid.ny, [&](std::size_t j) {
    const double y = grid.y(j) - center.y;
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double x = grid.x(i) - center.x;
      const double r = std::hypot(x, y);
      if (r > radius)
        continue;
      const std::size_t k = grid.index(i, j);
      aperture[k] = 1;
      open[k] = isOpen(x, y, r) ? 1 : 0;
    }
  });
  return BinaryMask(grid, std::move(open), std::move(aperture));
}

} // namespace

BinaryMask renderForkedGrating(const ForkedGratingSpec& spec, const GridSpec& grid)
{
  grid.validate();
  checkDuty(spec.duty);
  if (!(spec.period > 0.0) || !(spec.apertureRadius > 0.0))
    throw DomainError("grating period and aperture radius must be positive");
  if (spec.period < 8.0 * grid.pitch) {
    std::ostringstream msg;
    msg << "grating period " << spec.period << " m spans " << spec.period / grid.pitch
        << " pixels; at least 8 are required";
    throw SamplingError(msg.str());
  }

  const double threshold = cosPi(spec.duty);
  const double k = 2.0 * std::numbers::pi / spec.period;
  const double b = spec.burgers;
  return renderDisk(grid, spec.center, spec.apertureRadius,
                    [&](double x, double y, double) {
                      return std::cos(k * x + b * std::atan2(y, x)) >= threshold;
                    });
}

BinaryMask renderSpiralZonePlate(const SpiralZonePlateSpec& spec, const GridSpec& grid)
{
  grid.validate();
  checkDuty(spec.duty);
  if (!(spec.focalLength > 0.0) || !(spec.apertureRadius > 0.0))
    throw DomainError("zone plate focal length and aperture radius must be positive");
  const double outerZone = grid.wavelength * spec.focalLength / (2.0 * spec.apertureRadius);
  if (outerZone < 4.0 * grid.pitch) {
    std::ostringstream msg;
    msg << "outermost zone width " << outerZone << " m spans " << outerZone / grid.pitch
        << " pixels; at least 4 are required";
    throw SamplingError(msg.str());
  }

  const double threshold = cosPi(spec.duty);
  const double chirp = std::numbers::pi / (grid.wavelength * spec.focalLength);
  const double l = spec.charge;
  return renderDisk(grid, spec.center, spec.apertureRadius,
                    [&](double x, double y, double r) {
                      return std::cos(l * std::atan2(y, x) - chirp * r * r) >= threshold;
                    });
}

double gratingOrderAmplitude(double duty, int order)
{
  checkDuty(duty);
  if (order == 0)
    return duty;
  // a(-n) = a(n); evaluate at |n| so the symmetry is exact in floating point.
  const double n = std::abs(order);
  return sinPi(n * duty) / (std::numbers::pi * n);
}

} // namespace vortexsim
