#ifndef VORTEXSIM_BINARY_MASK_HPP
#define VORTEXSIM_BINARY_MASK_HPP

#include "vortexsim/grid.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace vortexsim
{

/// Binary amplitude screen: each pixel transmits fully or not at all.
///
/// `aperture` marks the pixels inside the bounding aperture of the element
/// that produced the mask; outside it the screen is always opaque.
/// complement() flips only aperture pixels.
class BinaryMask
{
public:
  BinaryMask(GridSpec grid, std::vector<std::uint8_t> open,
             std::vector<std::uint8_t> aperture);

  /// Every pixel open, aperture covering the whole grid.
  static BinaryMask transparent(const GridSpec& grid);
  /// Every pixel closed, aperture covering the whole grid.
  static BinaryMask opaque(const GridSpec& grid);

  const GridSpec& grid() const { return mGrid; }
  bool open(std::size_t i, std::size_t j) const { return mOpen[mGrid.index(i, j)] != 0; }
  bool inAperture(std::size_t i, std::size_t j) const
  {
    return mAperture[mGrid.index(i, j)] != 0;
  }
  std::span<const std::uint8_t> openFlags() const { return mOpen; }
  std::span<const std::uint8_t> apertureFlags() const { return mAperture; }

  /// Open pixels divided by aperture pixels (0 for an empty aperture).
  double openFraction() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
  GridSpec mGrid;
  std::vector<std::uint8_t> mOpen;
  std::vector<std::uint8_t> mAperture;
};

/// Flips open and closed pixels inside the aperture.
BinaryMask complement(const BinaryMask& mask);

} // namespace vortexsim

#endif
