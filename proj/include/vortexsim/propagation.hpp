#ifndef VORTEXSIM_PROPAGATION_HPP
#define VORTEXSIM_PROPAGATION_HPP

#include "vortexsim/field.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vortexsim
{

enum class PropagationMethod
{
  AngularSpectrum,
  FresnelTransfer,
  LensFourier,
};

std::string_view toString(PropagationMethod method);
PropagationMethod parsePropagationMethod(std::string_view name);

/// What to do with a field between two planes. `distance` is the free-space
/// distance for the transfer methods and the focal length for LensFourier.
struct PropagationPlan
{
  PropagationMethod method = PropagationMethod::AngularSpectrum;
  double distance = 0.0;
  /// Radius of the circular pass band as a fraction of the Nyquist frequency.
  double bandLimit = 0.95;

  /// Throws DomainError for a non-finite distance, a non-positive focal
  /// length or a band limit outside (0, 1].
  void validate() const;
};

/// Exact scalar free-space propagation over `distance` (may be negative).
///
/// Propagating components get exp(i z sqrt(k^2 - kx^2 - ky^2)); evanescent
/// ones decay for z > 0 and are dropped for z < 0; frequencies beyond
/// bandLimit * Nyquist are removed. z == 0 returns the input unchanged.
ComplexField angularSpectrumPropagate(const ComplexField& field, double distance,
                                      double bandLimit = 0.95);

/// Paraxial transfer function exp(i k z) exp(-i pi lambda z (fx^2 + fy^2)),
/// with the same band limit as angularSpectrumPropagate.
ComplexField fresnelTransferPropagate(const ComplexField& field, double distance,
                                      double bandLimit = 0.95);

/// Field in the back focal plane of an ideal lens of focal length f.
///
/// The output grid has pitch lambda f / (n pitch); power is conserved. The
/// input grid must be square. Throws DomainError for f <= 0.
ComplexField lensFourierTransform(const ComplexField& field, double focalLength);

/// Dispatches on plan.method.
ComplexField propagate(const ComplexField& field, const PropagationPlan& plan);

enum class GuardStatus
{
  Pass,
  Warn,
  Fail,
};

std::string_view toString(GuardStatus status);

/// One checked inequality.
struct GuardCheck
{
  std::string name;
  GuardStatus status = GuardStatus::Pass;
  double value = 0.0; ///< ratio of the sampled quantity to its bound; <= 1 passes
  std::string message;
};

/// Result of samplingGuard: the worst status over all checks.
struct SamplingReport
{
  GuardStatus status = GuardStatus::Pass;
  std::vector<GuardCheck> checks;

  /// Messages of the checks that did not pass, joined with "; ".
  std::string summary() const;
};

/// Checks that `plan` can be executed on `grid` without aliasing.
///
/// Transfer methods: the kernel chirp must be Nyquist sampled over the pass
/// band, lambda |z| nu / sqrt(1 - (lambda nu)^2) <= L / 2 at nu = bandLimit
/// times Nyquist (warn up to 2x, fail beyond). When `apertureDiameter` is
/// given, the aperture must not exceed half the grid extent (warn up to 3/4).
SamplingReport samplingGuard(const GridSpec& grid, const PropagationPlan& plan,
                             std::optional<double> apertureDiameter = std::nullopt);

} // namespace vortexsim

#endif
