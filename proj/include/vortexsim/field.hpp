#ifndef VORTEXSIM_FIELD_HPP
#define VORTEXSIM_FIELD_HPP

#include "vortexsim/binary_mask.hpp"
#include "vortexsim/grid.hpp"

#include <complex>
#include <span>
#include <vector>

namespace vortexsim
{

using Complex = std::complex<double>;

/// CODATA 2018 values.
namespace codata
{
inline constexpr double planck = 6.62607015e-34;          // J s
inline constexpr double electronMass = 9.1093837015e-31;  // kg
inline constexpr double elementaryCharge = 1.602176634e-19; // C
inline constexpr double speedOfLight = 299792458.0;       // m/s
} // namespace codata

/// Relativistic de Broglie wavelength of an electron accelerated through
/// `voltage` volts. Throws DomainError for voltage <= 0.
double electronWavelength(double voltage);

/// Complex scalar wavefunction sampled on a grid. Immutable once built.
class ComplexField
{
public:
  /// Throws ShapeError if the sample count does not match the grid and
  /// DomainError if any sample is not finite.
  ComplexField(GridSpec grid, std::vector<Complex> values);

  /// Zero field on `grid`.
  static ComplexField zeros(const GridSpec& grid);

  const GridSpec& grid() const { return mGrid; }
  std::span<const Complex> values() const { return mValues; }
  const Complex& at(std::size_t i, std::size_t j) const { return mValues[mGrid.index(i, j)]; }

  /// Moves the samples out, leaving the field empty. Used by transforms that
  /// recycle a temporary's storage.
  std::vector<Complex> release() && { return std::move(mValues); }

private:
  GridSpec mGrid;
  std::vector<Complex> mValues;
};

/// Real-valued plane sampled on a grid (intensity, phase).
struct RealField
{
  GridSpec grid;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }
};

/// Sum of |psi|^2 times pixel area.
double power(const ComplexField& field);

/// Scales the field to unit power. Throws DomainError for a zero field.
ComplexField normalize(const ComplexField& field);

/// Pointwise transmission through a binary mask. Throws ShapeError when the
/// grids differ.
ComplexField applyMask(const ComplexField& field, const BinaryMask& mask);

/// Multiplies every sample by `factor`.
ComplexField scale(const ComplexField& field, Complex factor);

/// Pointwise product of two fields on the same grid.
ComplexField multiply(const ComplexField& a, const ComplexField& b);

/// Pointwise sum of two fields on the same grid.
ComplexField add(const ComplexField& a, const ComplexField& b);

/// |psi|^2 per pixel.
RealField intensity(const ComplexField& field);

/// arg(psi) per pixel in [-pi, pi].
RealField phase(const ComplexField& field);

/// sqrt(sum |a - b|^2) / sqrt(sum |b|^2).
double relativeL2Difference(const ComplexField& a, const ComplexField& b);

} // namespace vortexsim

#endif
