#ifndef VORTEXSIM_BEAM_HPP
#define VORTEXSIM_BEAM_HPP

#include "vortexsim/field.hpp"

#include <string_view>

namespace vortexsim
{

enum class BeamProfile
{
  UniformDisk, ///< amplitude 1 for r <= radius
  Gaussian,    ///< exp(-r^2 / radius^2), radius is the 1/e amplitude waist
  Annulus,     ///< amplitude 1 for innerRadius <= r <= radius
};

std::string_view toString(BeamProfile profile);
/// Accepts "uniform-disk", "gaussian", "annulus".
BeamProfile parseBeamProfile(std::string_view name);

/// Incident vortex beam psi = A(r) exp(i m phi) about `center`.
struct BeamSpec
{
  int charge = 0;
  BeamProfile profile = BeamProfile::UniformDisk;
  double radius = 0.0;      ///< disk radius, Gaussian waist or annulus outer radius
  double innerRadius = 0.0; ///< annulus only
  Point center{};
};

/// Synthesizes the beam normalized to unit power. The pixel that sits exactly
/// on the vortex core is zero for charge != 0.
///
/// Throws SamplingError when a radius is not positive or reaches half the
/// grid extent.
ComplexField makeBeam(const GridSpec& grid, const BeamSpec& spec);

/// Uniform unit-power field filling the whole grid.
ComplexField makePlaneWave(const GridSpec& grid);

} // namespace vortexsim

#endif
