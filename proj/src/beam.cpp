#include "vortexsim/beam.hpp"

#include "vortexsim/errors.hpp"
#include "vortexsim/parallel.hpp"

#include <cmath>
#include <sstream>

namespace vortexsim
{

std::string_view toString(BeamProfile profile)
{
  switch (profile) {
  case BeamProfile::UniformDisk:
    return "uniform-disk";
  case BeamProfile::Gaussian:
    return "gaussian";
  case BeamProfile::Annulus:
    return "annulus";
  }
  return "unknown";
}

BeamProfile parseBeamProfile(std::string_view name)
{
  if (name == "uniform-disk")
    return BeamProfile::UniformDisk;
  if (name == "gaussian")
    return BeamProfile::Gaussian;
  if (name == "annulus")
    return BeamProfile::Annulus;
  throw ConfigError("unknown beam profile '" + std::string(name) +
                    "' (expected uniform-disk, gaussian or annulus)");
}

namespace
{

void checkBeamFits(const GridSpec& grid, const BeamSpec& spec)
{
  const double halfExtent = 0.5 * std::min(grid.extentX(), grid.extentY());
  std::ostringstream msg;
  if (!(spec.radius > 0.0))
    msg << "beam radius must be positive, got " << spec.radius;
  else if (spec.radius >= halfExtent)
    msg << "beam radius " << spec.radius << " m must be smaller than half the grid extent ("
        << halfExtent << " m)";
  else if (spec.profile == BeamProfile::Annulus &&
           !(spec.innerRadius > 0.0 && spec.innerRadius < spec.radius))
    msg << "annulus inner radius " << spec.innerRadius
        << " m must lie in (0, outer radius " << spec.radius << " m)";
  else
    return;
  throw SamplingError(msg.str());
}

} // namespace

ComplexField makeBeam(const GridSpec& grid, const BeamSpec& spec)
{
  grid.validate();
  checkBeamFits(grid, spec);

  std::vector<Complex> values(grid.size());
  parallelRows(grid.ny, [&](std::size_t j) {
    const double y = grid.y(j) - spec.center.y;
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double x = grid.x(i) - spec.center.x;
      const double r = std::hypot(x, y);
      double amplitude = 0.0;
      switch (spec.profile) {
      case BeamProfile::UniformDisk:
        amplitude = r <= spec.radius ? 1.0 : 0.0;
        break;
      case BeamProfile::Gaussian:
        amplitude = std::exp(-(r * r) / (spec.radius * spec.radius));
        break;
      case BeamProfile::Annulus:
        amplitude = (r >= spec.innerRadius && r <= spec.radius) ? 1.0 : 0.0;
        break;
      }
      if (spec.charge != 0 && r == 0.0)
        amplitude = 0.0;
      if (amplitude == 0.0)
        continue;
      values[grid.index(i, j)] = std::polar(amplitude, spec.charge * std::atan2(y, x));
    }
  });
  return normalize(ComplexField(grid, std::move(values)));
}

ComplexField makePlaneWave(const GridSpec& grid)
{
  grid.validate();
  return normalize(ComplexField(grid, std::vector<Complex>(grid.size(), Complex(1.0, 0.0))));
}

} // namespace vortexsim
