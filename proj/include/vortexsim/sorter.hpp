#ifndef VORTEXSIM_SORTER_HPP
#define VORTEXSIM_SORTER_HPP

#include "vortexsim/analysis.hpp"
#include "vortexsim/errors.hpp"
#include "vortexsim/field.hpp"
#include "vortexsim/masks.hpp"

#include <vector>

namespace vortexsim
{

/// Forked grating, ideal lens and one pinhole per diffraction order.
struct SorterConfig
{
  ForkedGratingSpec grating;
  double focalLength = 0.0;
  double pinholeRadius = 0.0; ///< meters; must stay below half the order spacing
  IntRange orders{-6, 6};
  /// Divide each pinhole transmission by the power in the order's own cell
  /// (a square of side lambda f / d about its center), so orders compete on
  /// how much of their own power sits on axis rather than on how bright they are.
  bool normalizeByOrderPower = true;
  /// Two orders whose transmissions differ by less than this fraction of the
  /// larger one make the result ambiguous.
  double ambiguityThreshold = 0.01;

  /// Throws ConfigError for a zero Burgers vector, an empty order range, a
  /// non-positive pinhole or one that would overlap the adjacent order.
  void validate(double wavelength) const;
};

struct OrderTransmission
{
  int order = 0;
  double raw = 0.0;        ///< pinhole power / total power
  double orderPower = 0.0; ///< power in the order's cell / total power
  double score = 0.0;     ///< raw, or raw / orderPower when normalizing
};

struct SortResult
{
  int mHat = 0;
  int bestOrder = 0;
  double confidence = 0.0; ///< best score / sum of scores
  std::vector<OrderTransmission> perOrder;
};

/// Thrown by sortOam when the two best orders are within the ambiguity
/// threshold of each other.
class AmbiguousSortError : public AnalysisError
{
public:
  AmbiguousSortError(const std::string& what, int firstOrder, int secondOrder, int firstM,
                     int secondM)
    : AnalysisError(what), orders{firstOrder, secondOrder}, candidates{firstM, secondM}
  {
  }

  int orders[2];
  int candidates[2]; ///< OAM estimates implied by the two orders
};

/// Fraction of the field's power inside a disk. Pixels on the rim are
/// weighted by the fraction of their area inside the disk (16 x 16
/// subsamples). Throws AnalysisError when the disk is clipped by the grid.
double pinholeTransmission(const ComplexField& field, Point center, double radius);

/// Estimates the OAM of `input`: applies the grating, transforms to the
/// focal plane and picks the order n* whose pinhole score is largest. Every
/// order cell in the range must lie inside the focal-plane grid. The
/// order carrying zero OAM satisfies m + n* b = 0, so m_hat = -n* b.
SortResult sortOam(const ComplexField& input, const SorterConfig& config);

} // namespace vortexsim

#endif
