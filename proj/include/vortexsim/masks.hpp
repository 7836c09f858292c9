#ifndef VORTEXSIM_MASKS_HPP
#define VORTEXSIM_MASKS_HPP

#include "vortexsim/binary_mask.hpp"
#include "vortexsim/grid.hpp"

namespace vortexsim
{

/// Binary grating with an edge dislocation ("fork") at `center`.
struct ForkedGratingSpec
{
  double period = 0.0;         ///< meters
  int burgers = 1;             ///< dislocation strength; order n gains n*burgers OAM quanta
  double apertureRadius = 0.0; ///< meters
  double duty = 0.5;           ///< open fraction of one period
  Point center{};
};

/// Fresnel zone plate whose zones spiral with topological charge `charge`.
struct SpiralZonePlateSpec
{
  int charge = 0;
  double focalLength = 0.0;    ///< meters, first-order focus
  double apertureRadius = 0.0; ///< meters
  double duty = 0.5;
  Point center{};
};

/// Pixel open iff cos(2 pi x / d + b phi) >= cos(pi duty) and r <= R, with x,
/// r and phi measured from the fork core. Ties resolve to open.
///
/// Throws SamplingError when the period spans fewer than 8 pixels and
/// DomainError for an invalid spec.
BinaryMask renderForkedGrating(const ForkedGratingSpec& spec, const GridSpec& grid);

/// Pixel open iff cos(l phi - pi r^2 / (lambda f)) >= cos(pi duty) and r <= R.
///
/// Throws SamplingError when the outermost zone width lambda f / (2R) spans
/// fewer than 4 pixels.
BinaryMask renderSpiralZonePlate(const SpiralZonePlateSpec& spec, const GridSpec& grid);

/// Fourier coefficient of a binary square wave with open fraction `duty`:
/// sin(pi n duty) / (pi n), and duty for n = 0. Integer multiples of pi
/// give an exact zero.
double gratingOrderAmplitude(double duty, int order);

} // namespace vortexsim

#endif
