#ifndef VORTEXSIM_ANALYSIS_HPP
#define VORTEXSIM_ANALYSIS_HPP

#include "vortexsim/field.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vortexsim
{

/// Inclusive integer interval.
struct IntRange
{
  int min = 0;
  int max = 0;

  int count() const { return max - min + 1; }
  bool contains(int v) const { return v >= min && v <= max; }
};

/// Predicted position of one diffraction order.
struct OrderLocation
{
  int order = 0;
  Point center{};
  /// False when the center falls outside the output grid (only set when a
  /// grid was supplied).
  bool inGrid = true;
};

/// x_n = n lambda f / d on the x axis. Throws DomainError unless d, lambda,
/// f > 0. Orders outside `outputGrid` are returned with inGrid = false.
std::vector<OrderLocation> locateOrders(double period, double wavelength, double focalLength,
                                        IntRange orders,
                                        const GridSpec* outputGrid = nullptr);

/// Power fraction per azimuthal mode q of a field over an annulus.
struct OAMSpectrum
{
  Point center{};
  IntRange qRange{};
  std::vector<double> powerFraction; ///< indexed by q - qRange.min
  int dominantQ = 0;

  double fraction(int q) const { return powerFraction.at(static_cast<std::size_t>(q - qRange.min)); }
  double total() const;
};

/// Decomposes psi(r, phi) = sum_q c_q(r) exp(i q phi) on circles about
/// `center` sampled every pixel pitch in [rMin, rMax], with bilinear
/// interpolation and at least max(64, 8 |q|max) azimuthal samples.
/// power_fraction[q] = sum_r |c_q(r)|^2 r / sum_r <|psi|^2>(r) r.
/// dominantQ is the argmax; ties go to the smaller |q|, then the smaller q.
///
/// Throws AnalysisError when the annulus leaves the grid or holds fewer than
/// 8 sample radii.
OAMSpectrum azimuthalModeSpectrum(const ComplexField& field, Point center, double rMin,
                                  double rMax, IntRange qRange);

struct WindingResult
{
  int winding = 0;
  double residual = 0.0; ///< |sum/2pi - winding| before rounding
  double radius = 0.0;
};

/// Net phase circulation around a circle, in units of 2 pi.
///
/// Throws AnalysisError when the circle leaves the grid, when the amplitude
/// on it drops below amplitudeFloor times the field maximum (the circle
/// crosses a null), or when the rounding residual exceeds 0.25.
WindingResult phaseWinding(const ComplexField& field, Point center, double radius,
                           double amplitudeFloor = 1e-6);

/// Radius in [rMin, rMax] (searched in quarter-pixel steps) whose circle has
/// the largest minimum amplitude: the safest circle for phaseWinding.
double bestWindingRadius(const ComplexField& field, Point center, double rMin, double rMax);

/// Riemann sum of intensity times pixel area over pixels with
/// |x - cx| <= halfWidth and |y - cy| <= halfWidth. Throws AnalysisError if
/// the box extends beyond the grid.
double integrateBox(const RealField& intensity, Point center, double halfWidth);

struct RingMeasurement
{
  double radius = 0.0;
  /// False when the radial profile peaks on axis; radius is then 0.
  bool found = false;
};

/// Intensity-weighted radial centroid of the brightest ring within maxRadius
/// of `center`. The ring spans the radial-profile bins between the local
/// minima on either side of the profile maximum.
RingMeasurement ringRadius(const RealField& intensity, Point center, double maxRadius);

/// Local maxima of the intensity along a circle whose topographic prominence
/// is at least `prominence` times the largest sample on the circle.
int countAzimuthalPeaks(const RealField& intensity, Point center, double radius,
                        double prominence = 0.1);

/// Measurements of one diffraction order.
struct OrderMeasurement
{
  int order = 0;
  Point center{};
  bool inGrid = false;
  double integratedPower = 0.0;
  double onAxisIntensity = 0.0;
  RingMeasurement ring{};
  int peakCount = 0;
  std::optional<WindingResult> winding;
  std::string windingError;
  int dominantQ = 0;
  double dominantFraction = 0.0;
  OAMSpectrum spectrum{}; ///< over the disk of radius boxHalfWidth
};

struct AsymmetryEntry
{
  int order = 0;
  double value = 0.0;
};

/// Observables of a diffraction-plane field, one entry per order.
struct DiffractionReport
{
  double orderSpacing = 0.0;
  double boxHalfWidth = 0.0;
  std::vector<OrderMeasurement> orders;
  std::vector<AsymmetryEntry> asymmetries; ///< for every n > 0 with both +-n in the grid

  const OrderMeasurement* find(int order) const;
};

/// (P_n - P_-n) / (P_n + P_-n). Throws AnalysisError if either order is
/// missing or both powers are zero.
double orderAsymmetry(const DiffractionReport& report, int order);

struct OrderAnalysisSettings
{
  double period = 0.0;      ///< grating period, meters
  double focalLength = 0.0; ///< lens focal length, meters
  IntRange orders{-3, 3};
  double boxHalfWidthFraction = 0.3; ///< of the order spacing
  int qMax = 20;
  double peakProminence = 0.1;
};

/// Measures every order of a lens-transformed grating pattern.
DiffractionReport measureOrders(const ComplexField& diffractionField,
                                const OrderAnalysisSettings& settings);

/// Bilinear interpolation; throws AnalysisError outside the grid.
Complex sampleBilinear(const ComplexField& field, Point p);
double sampleBilinear(const RealField& field, Point p);

} // namespace vortexsim

#endif
