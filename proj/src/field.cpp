#include "vortexsim/field.hpp"

#include "vortexsim/errors.hpp"
#include "vortexsim/parallel.hpp"

#include <cmath>
#include <sstream>

namespace vortexsim
{

void GridSpec::validate() const
{
  std::ostringstream msg;
  if (nx < 16 || ny < 16)
    msg << "grid must be at least 16x16 pixels, got " << nx << "x" << ny;
  else if (!(pitch > 0.0) || !std::isfinite(pitch))
    msg << "grid pitch must be positive, got " << pitch;
  else if (!(wavelength > 0.0) || !std::isfinite(wavelength))
    msg << "wavelength must be positive, got " << wavelength;
  else
    return;
  throw DomainError(msg.str());
}

double electronWavelength(double voltage)
{
  if (!(voltage > 0.0) || !std::isfinite(voltage))
    throw DomainError("acceleration voltage must be positive");
  using namespace codata;
  const double energy = elementaryCharge * voltage;
  const double restEnergy = electronMass * speedOfLight * speedOfLight;
  const double momentum =
    std::sqrt(2.0 * electronMass * energy * (1.0 + energy / (2.0 * restEnergy)));
  return planck / momentum;
}

ComplexField::ComplexField(GridSpec grid, std::vector<Complex> values)
  : mGrid(grid), mValues(std::move(values))
{
  mGrid.validate();
  if (mValues.size() != mGrid.size()) {
    std::ostringstream msg;
    msg << "field has " << mValues.size() << " samples, grid needs " << mGrid.size();
    throw ShapeError(msg.str());
  }
  for (const Complex& v : mValues) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw DomainError("field contains a non-finite sample");
  }
}

ComplexField ComplexField::zeros(const GridSpec& grid)
{
  grid.validate();
  return ComplexField(grid, std::vector<Complex>(grid.size()));
}

double power(const ComplexField& field)
{
  double sum = 0.0;
  for (const Complex& v : field.values())
    sum += std::norm(v);
  return sum * field.grid().pixelArea();
}

ComplexField normalize(const ComplexField& field)
{
  const double p = power(field);
  if (!(p > 0.0))
    throw DomainError("cannot normalize a field with zero power");
  return scale(field, Complex(1.0 / std::sqrt(p), 0.0));
}

namespace
{

void requireSameGrid(const GridSpec& a, const GridSpec& b, const char* what)
{
  if (!(a == b))
    throw ShapeError(std::string(what) + ": grids differ");
}

template <typename Op>
ComplexField pointwise(const GridSpec& grid, Op op)
{
  std::vector<Complex> out(grid.size());
  parallelRows(grid.ny, [&](std::size_t j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const std::size_t k = grid.index(i, j);
      out[k] = op(k);
    }
  });
  return ComplexField(grid, std::move(out));
}

} // namespace

ComplexField applyMask(const ComplexField& field, const BinaryMask& mask)
{
  requireSameGrid(field.grid(), mask.grid(), "applyMask");
  const auto values = field.values();
  const auto open = mask.openFlags();
  return pointwise(field.grid(),
                   [&](std::size_t k) { return open[k] ? values[k] : Complex{}; });
}

ComplexField scale(const ComplexField& field, Complex factor)
{
  const auto values = field.values();
  return pointwise(field.grid(), [&](std::size_t k) { return values[k] * factor; });
}

ComplexField multiply(const ComplexField& a, const ComplexField& b)
{
  requireSameGrid(a.grid(), b.grid(), "multiply");
  const auto va = a.values();
  const auto vb = b.values();
  return pointwise(a.grid(), [&](std::size_t k) { return va[k] * vb[k]; });
}

ComplexField add(const ComplexField& a, const ComplexField& b)
{
  requireSameGrid(a.grid(), b.grid(), "add");
  const auto va = a.values();
  const auto vb = b.values();
  return pointwise(a.grid(), [&](std::size_t k) { return va[k] + vb[k]; });
}

RealField intensity(const ComplexField& field)
{
  RealField out{field.grid(), std::vector<double>(field.grid().size())};
  const auto values = field.values();
  for (std::size_t k = 0; k < values.size(); ++k)
    out.values[k] = std::norm(values[k]);
  return out;
}

RealField phase(const ComplexField& field)
{
  RealField out{field.grid(), std::vector<double>(field.grid().size())};
  const auto values = field.values();
  for (std::size_t k = 0; k < values.size(); ++k)
    out.values[k] = std::arg(values[k]);
  return out;
}

double relativeL2Difference(const ComplexField& a, const ComplexField& b)
{
  requireSameGrid(a.grid(), b.grid(), "relativeL2Difference");
  const auto va = a.values();
  const auto vb = b.values();
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t k = 0; k < va.size(); ++k) {
    diff += std::norm(va[k] - vb[k]);
    ref += std::norm(vb[k]);
  }
  if (ref == 0.0)
    return diff == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(diff / ref);
}

// BinaryMask lives with the field algebra that consumes it.
BinaryMask::BinaryMask(GridSpec grid, std::vector<std::uint8_t> open,
                       std::vector<std::uint8_t> aperture)
  : mGrid(grid), mOpen(std::move(open)), mAperture(std::move(aperture))
{
  mGrid.validate();
  if (mOpen.size() != mGrid.size() || mAperture.size() != mGrid.size())
    throw ShapeError("mask arrays do not match the grid");
  for (std::size_t k = 0; k < mOpen.size(); ++k) {
    mOpen[k] = mOpen[k] ? 1 : 0;
    mAperture[k] = mAperture[k] ? 1 : 0;
    if (mOpen[k] && !mAperture[k])
      throw DomainError("mask is open outside its aperture");
  }
}

BinaryMask BinaryMask::transparent(const GridSpec& grid)
{
  return BinaryMask(grid, std::vector<std::uint8_t>(grid.size(), 1),
                    std::vector<std::uint8_t>(grid.size(), 1));
}

BinaryMask BinaryMask::opaque(const GridSpec& grid)
{
  return BinaryMask(grid, std::vector<std::uint8_t>(grid.size(), 0),
                    std::vector<std::uint8_t>(grid.size(), 1));
}

double BinaryMask::openFraction() const
{
  std::size_t open = 0;
  std::size_t inside = 0;
  for (std::size_t k = 0; k < mOpen.size(); ++k) {
    open += mOpen[k];
    inside += mAperture[k];
  }
  return inside == 0 ? 0.0 : static_cast<double>(open) / static_cast<double>(inside);
}

BinaryMask complement(const BinaryMask& mask)
{
  const auto open = mask.openFlags();
  const auto aperture = mask.apertureFlags();
  std::vector<std::uint8_t> flipped(open.size());
  for (std::size_t k = 0; k < open.size(); ++k)
    flipped[k] = aperture[k] && !open[k];
  return BinaryMask(mask.grid(), std::move(flipped),
                    std::vector<std::uint8_t>(aperture.begin(), aperture.end()));
}

} // namespace vortexsim
