#include "vortexsim/analysis.hpp"

#include "vortexsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace vortexsim
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Tolerance for "inside the grid" comparisons, in pixels.
constexpr double kEdgeSlack = 1e-9;

struct Cell
{
  std::size_t i0;
  std::size_t j0;
  double tx;
  double ty;
};

bool locate(const GridSpec& grid, Point p, Cell& cell)
{
  const double fi = grid.column(p.x);
  const double fj = grid.row(p.y);
  const double maxI = static_cast<double>(grid.nx - 1);
  const double maxJ = static_cast<double>(grid.ny - 1);
  if (!(fi >= -kEdgeSlack && fi <= maxI + kEdgeSlack && fj >= -kEdgeSlack &&
        fj <= maxJ + kEdgeSlack))
    return false;
  const double ci = std::clamp(fi, 0.0, maxI);
  const double cj = std::clamp(fj, 0.0, maxJ);
  cell.i0 = std::min(static_cast<std::size_t>(ci), grid.nx - 2);
  cell.j0 = std::min(static_cast<std::size_t>(cj), grid.ny - 2);
  cell.tx = ci - static_cast<double>(cell.i0);
  cell.ty = cj - static_cast<double>(cell.j0);
  return true;
}

template <typename T, typename Get>
T interpolate(const GridSpec& grid, Point p, Get get)
{
  Cell c{};
  if (!locate(grid, p, c)) {
    std::ostringstream msg;
    msg << "sample point (" << p.x << ", " << p.y << ") m lies outside the grid";
    throw AnalysisError(msg.str());
  }
  const T v00 = get(c.i0, c.j0);
  const T v10 = get(c.i0 + 1, c.j0);
  const T v01 = get(c.i0, c.j0 + 1);
  const T v11 = get(c.i0 + 1, c.j0 + 1);
  return (v00 * (1.0 - c.tx) + v10 * c.tx) * (1.0 - c.ty) + (v01 * (1.0 - c.tx) + v11 * c.tx) * c.ty;
}

void requireCircleInside(const GridSpec& grid, Point center, double radius, const char* what)
{
  const double slack = kEdgeSlack * grid.pitch;
  if (center.x - radius < grid.xMin() - slack || center.x + radius > grid.xMax() + slack ||
      center.y - radius < grid.yMin() - slack || center.y + radius > grid.yMax() + slack) {
    std::ostringstream msg;
    msg << what << ": circle of radius " << radius << " m about (" << center.x << ", "
        << center.y << ") m leaves the grid";
    throw AnalysisError(msg.str());
  }
}

std::size_t circleSamples(double radius, double pitch, std::size_t minimum)
{
  const auto byArc = static_cast<std::size_t>(std::ceil(4.0 * std::numbers::pi * radius / pitch));
  return std::max(minimum, byArc);
}

double maxAmplitude(const ComplexField& field)
{
  double best = 0.0;
  for (const Complex& v : field.values())
    best = std::max(best, std::norm(v));
  return std::sqrt(best);
}

} // namespace

Complex sampleBilinear(const ComplexField& field, Point p)
{
  return interpolate<Complex>(field.grid(), p,
                              [&](std::size_t i, std::size_t j) { return field.at(i, j); });
}

double sampleBilinear(const RealField& field, Point p)
{
  return interpolate<double>(field.grid, p,
                             [&](std::size_t i, std::size_t j) { return field.at(i, j); });
}

std::vector<OrderLocation> locateOrders(double period, double wavelength, double focalLength,
                                        IntRange orders, const GridSpec* outputGrid)
{
  if (!(period > 0.0) || !(wavelength > 0.0) || !(focalLength > 0.0))
    throw DomainError("period, wavelength and focal length must be positive");
  const double spacing = wavelength * focalLength / period;
  std::vector<OrderLocation> out;
  for (int n = orders.min; n <= orders.max; ++n) {
    OrderLocation loc{n, Point{n * spacing, 0.0}, true};
    if (outputGrid) {
      const double slack = kEdgeSlack * outputGrid->pitch;
      loc.inGrid = loc.center.x >= outputGrid->xMin() - slack &&
                   loc.center.x <= outputGrid->xMax() + slack;
    }
    out.push_back(loc);
  }
  return out;
}

double OAMSpectrum::total() const
{
  double sum = 0.0;
  for (double f : powerFraction)
    sum += f;
  return sum;
}

OAMSpectrum azimuthalModeSpectrum(const ComplexField& field, Point center, double rMin,
                                  double rMax, IntRange qRange)
{
  const GridSpec& grid = field.grid();
  if (!(rMin >= 0.0) || !(rMax > rMin))
    throw AnalysisError("annulus needs 0 <= r_min < r_max");
  if (qRange.max < qRange.min)
    throw AnalysisError("empty q range");
  requireCircleInside(grid, center, rMax, "azimuthal spectrum");

  const auto radii = static_cast<std::size_t>(std::floor((rMax - rMin) / grid.pitch + 1e-9)) + 1;
  if (radii < 8) {
    std::ostringstream msg;
    msg << "annulus [" << rMin << ", " << rMax << "] m holds " << radii
        << " sample radii; at least 8 are required";
    throw AnalysisError(msg.str());
  }

  const int qAbs = std::max(std::abs(qRange.min), std::abs(qRange.max));
  const std::size_t samples =
    circleSamples(rMax, grid.pitch, std::max<std::size_t>(64, 8 * static_cast<std::size_t>(qAbs)));
  const auto modes = static_cast<std::size_t>(qRange.count());

  // twiddle[q][s] = exp(-i q phi_s) / M
  std::vector<Complex> twiddle(modes * samples);
  std::vector<double> cosPhi(samples);
  std::vector<double> sinPhi(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const double phi = kTwoPi * static_cast<double>(s) / static_cast<double>(samples);
    cosPhi[s] = std::cos(phi);
    sinPhi[s] = std::sin(phi);
    for (std::size_t m = 0; m < modes; ++m) {
      const int q = qRange.min + static_cast<int>(m);
      twiddle[m * samples + s] = std::polar(1.0 / static_cast<double>(samples), -q * phi);
    }
  }

  std::vector<double> modePower(modes, 0.0);
  double annulusPower = 0.0;
  std::vector<Complex> ring(samples);
  for (std::size_t k = 0; k < radii; ++k) {
    const double r = rMin + static_cast<double>(k) * grid.pitch;
    double meanSq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      ring[s] = sampleBilinear(field, Point{center.x + r * cosPhi[s], center.y + r * sinPhi[s]});
      meanSq += std::norm(ring[s]);
    }
    meanSq /= static_cast<double>(samples);
    annulusPower += meanSq * r;
    for (std::size_t m = 0; m < modes; ++m) {
      Complex c{};
      const Complex* tw = &twiddle[m * samples];
      for (std::size_t s = 0; s < samples; ++s)
        c += ring[s] * tw[s];
      modePower[m] += std::norm(c) * r;
    }
  }
  if (!(annulusPower > 0.0))
    throw AnalysisError("annulus carries no power");

  OAMSpectrum spectrum;
  spectrum.center = center;
  spectrum.qRange = qRange;
  spectrum.powerFraction.resize(modes);
  std::size_t best = 0;
  for (std::size_t m = 0; m < modes; ++m) {
    spectrum.powerFraction[m] = modePower[m] / annulusPower;
    const int q = qRange.min + static_cast<int>(m);
    const int bestQ = qRange.min + static_cast<int>(best);
    const double f = spectrum.powerFraction[m];
    const double fb = spectrum.powerFraction[best];
    if (f > fb || (f == fb && (std::abs(q) < std::abs(bestQ))))
      best = m;
  }
  spectrum.dominantQ = qRange.min + static_cast<int>(best);
  return spectrum;
}

WindingResult phaseWinding(const ComplexField& field, Point center, double radius,
                           double amplitudeFloor)
{
  const GridSpec& grid = field.grid();
  if (!(radius > 0.0))
    throw AnalysisError("winding radius must be positive");
  requireCircleInside(grid, center, radius, "phase winding");

  const double floor = amplitudeFloor * maxAmplitude(field);
  const std::size_t samples = circleSamples(4.0 * radius, grid.pitch, 256);
  Complex first{};
  Complex prev{};
  double total = 0.0;
  for (std::size_t s = 0; s <= samples; ++s) {
    Complex v;
    if (s == samples) {
      v = first;
    } else {
      const double phi = kTwoPi * static_cast<double>(s) / static_cast<double>(samples);
      v = sampleBilinear(field, Point{center.x + radius * std::cos(phi),
                                      center.y + radius * std::sin(phi)});
      if (!(std::abs(v) > floor)) {
        std::ostringstream msg;
        msg << "indeterminate winding: amplitude on the circle of radius " << radius
            << " m falls below the floor; try a different radius";
        throw AnalysisError(msg.str());
      }
    }
    if (s == 0)
      first = v;
    else
      total += std::arg(v * std::conj(prev));
    prev = v;
  }

  const double turns = total / kTwoPi;
  WindingResult result;
  result.winding = static_cast<int>(std::lround(turns));
  result.residual = std::abs(turns - result.winding);
  result.radius = radius;
  if (result.residual > 0.25) {
    std::ostringstream msg;
    msg << "indeterminate winding: circulation " << turns << " turns is not near an integer";
    throw AnalysisError(msg.str());
  }
  return result;
}

double bestWindingRadius(const ComplexField& field, Point center, double rMin, double rMax)
{
  const GridSpec& grid = field.grid();
  if (!(rMin > 0.0) || !(rMax >= rMin))
    throw AnalysisError("winding search needs 0 < r_min <= r_max");
  requireCircleInside(grid, center, rMax, "winding radius search");
  const double step = 0.25 * grid.pitch;
  double bestRadius = rMin;
  double bestFloor = -1.0;
  for (double r = rMin; r <= rMax + 1e-12 * rMax; r += step) {
    const std::size_t samples = circleSamples(r, grid.pitch, 128);
    double low = INFINITY;
    for (std::size_t s = 0; s < samples; ++s) {
      const double phi = kTwoPi * static_cast<double>(s) / static_cast<double>(samples);
      low = std::min(low, std::abs(sampleBilinear(
                            field, Point{center.x + r * std::cos(phi), center.y + r * std::sin(phi)})));
    }
    if (low > bestFloor) {
      bestFloor = low;
      bestRadius = r;
    }
  }
  return bestRadius;
}

double integrateBox(const RealField& intensity, Point center, double halfWidth)
{
  const GridSpec& grid = intensity.grid;
  if (!(halfWidth >= 0.0))
    throw AnalysisError("box half width must be non-negative");
  const double slack = kEdgeSlack * grid.pitch;
  if (center.x - halfWidth < grid.xMin() - slack || center.x + halfWidth > grid.xMax() + slack ||
      center.y - halfWidth < grid.yMin() - slack || center.y + halfWidth > grid.yMax() + slack) {
    std::ostringstream msg;
    msg << "integration box of half width " << halfWidth << " m about (" << center.x << ", "
        << center.y << ") m is clipped by the grid";
    throw AnalysisError(msg.str());
  }

  const double limit = halfWidth + slack;
  const auto iLo = static_cast<std::size_t>(std::max(0.0, std::floor(grid.column(center.x - limit))));
  const auto jLo = static_cast<std::size_t>(std::max(0.0, std::floor(grid.row(center.y - limit))));
  const auto iHi = std::min(grid.nx - 1, static_cast<std::size_t>(std::ceil(grid.column(center.x + limit))));
  const auto jHi = std::min(grid.ny - 1, static_cast<std::size_t>(std::ceil(grid.row(center.y + limit))));

  double sum = 0.0;
  for (std::size_t j = jLo; j <= jHi; ++j) {
    if (std::abs(grid.y(j) - center.y) > limit)
      continue;
    for (std::size_t i = iLo; i <= iHi; ++i) {
      if (std::abs(grid.x(i) - center.x) > limit)
        continue;
      sum += intensity.at(i, j);
    }
  }
  return sum * grid.pixelArea();
}

RingMeasurement ringRadius(const RealField& intensity, Point center, double maxRadius)
{
  const GridSpec& grid = intensity.grid;
  if (!(maxRadius > grid.pitch))
    throw AnalysisError("ring search radius must exceed one pixel");
  requireCircleInside(grid, center, maxRadius, "ring radius");

  const auto bins = static_cast<std::size_t>(std::floor(maxRadius / grid.pitch)) + 1;
  std::vector<double> sum(bins, 0.0);
  std::vector<std::size_t> count(bins, 0);

  const auto iLo = static_cast<std::size_t>(std::max(0.0, std::floor(grid.column(center.x - maxRadius))));
  const auto jLo = static_cast<std::size_t>(std::max(0.0, std::floor(grid.row(center.y - maxRadius))));
  const auto iHi = std::min(grid.nx - 1, static_cast<std::size_t>(std::ceil(grid.column(center.x + maxRadius))));
  const auto jHi = std::min(grid.ny - 1, static_cast<std::size_t>(std::ceil(grid.row(center.y + maxRadius))));

  auto binOf = [&](std::size_t i, std::size_t j, double& r) -> std::size_t {
    r = std::hypot(grid.x(i) - center.x, grid.y(j) - center.y);
    if (r > maxRadius)
      return bins;
    return std::min(bins - 1, static_cast<std::size_t>(r / grid.pitch));
  };

  for (std::size_t j = jLo; j <= jHi; ++j) {
    for (std::size_t i = iLo; i <= iHi; ++i) {
      double r = 0.0;
      const std::size_t b = binOf(i, j, r);
      if (b == bins)
        continue;
      sum[b] += intensity.at(i, j);
      ++count[b];
    }
  }

  std::vector<double> profile(bins, 0.0);
  for (std::size_t b = 0; b < bins; ++b)
    profile[b] = count[b] ? sum[b] / static_cast<double>(count[b]) : 0.0;

  const auto peak = static_cast<std::size_t>(
    std::distance(profile.begin(), std::max_element(profile.begin(), profile.end())));
  if (peak == 0 || !(profile[peak] > 0.0))
    return RingMeasurement{0.0, false};

  std::size_t lo = peak;
  while (lo > 0 && profile[lo - 1] < profile[lo])
    --lo;
  std::size_t hi = peak;
  while (hi + 1 < bins && profile[hi + 1] < profile[hi])
    ++hi;

  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t j = jLo; j <= jHi; ++j) {
    for (std::size_t i = iLo; i <= iHi; ++i) {
      double r = 0.0;
      const std::size_t b = binOf(i, j, r);
      if (b < lo || b > hi)
        continue;
      weighted += r * intensity.at(i, j);
      total += intensity.at(i, j);
    }
  }
  if (!(total > 0.0))
    return RingMeasurement{0.0, false};
  return RingMeasurement{weighted / total, true};
}

int countAzimuthalPeaks(const RealField& intensity, Point center, double radius,
                        double prominence)
{
  const GridSpec& grid = intensity.grid;
  if (!(radius > 0.0))
    throw AnalysisError("peak-count radius must be positive");
  requireCircleInside(grid, center, radius, "azimuthal peaks");

  const std::size_t n = circleSamples(2.0 * radius, grid.pitch, 720);
  std::vector<double> v(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double phi = kTwoPi * static_cast<double>(s) / static_cast<double>(n);
    v[s] = sampleBilinear(intensity, Point{center.x + radius * std::cos(phi),
                                           center.y + radius * std::sin(phi)});
  }
  const double top = *std::max_element(v.begin(), v.end());
  const double bottom = *std::min_element(v.begin(), v.end());
  if (!(top > 0.0))
    return 0;
  const double threshold = prominence * top;

  auto at = [&](long k) { return v[static_cast<std::size_t>(((k % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n))]; };

  int peaks = 0;
  for (long s = 0; s < static_cast<long>(n); ++s) {
    const double h = v[static_cast<std::size_t>(s)];
    if (!(h > at(s - 1) && h >= at(s + 1)))
      continue;
    // Lowest point on each side before reaching higher ground.
    double leftMin = h;
    bool leftHigher = false;
    for (long k = 1; k < static_cast<long>(n); ++k) {
      const double u = at(s - k);
      if (u > h) {
        leftHigher = true;
        break;
      }
      leftMin = std::min(leftMin, u);
    }
    double rightMin = h;
    bool rightHigher = false;
    for (long k = 1; k < static_cast<long>(n); ++k) {
      const double u = at(s + k);
      if (u > h) {
        rightHigher = true;
        break;
      }
      rightMin = std::min(rightMin, u);
    }
    const double base = (leftHigher || rightHigher) ? std::max(leftMin, rightMin) : bottom;
    if (h - base >= threshold)
      ++peaks;
  }
  return peaks;
}

const OrderMeasurement* DiffractionReport::find(int order) const
{
  for (const OrderMeasurement& m : orders) {
    if (m.order == order)
      return &m;
  }
  return nullptr;
}

double orderAsymmetry(const DiffractionReport& report, int order)
{
  const OrderMeasurement* plus = report.find(order);
  const OrderMeasurement* minus = report.find(-order);
  if (!plus || !minus || !plus->inGrid || !minus->inGrid) {
    std::ostringstream msg;
    msg << "asymmetry of order " << order << " needs both +" << std::abs(order) << " and -"
        << std::abs(order) << " inside the grid";
    throw AnalysisError(msg.str());
  }
  const double sum = plus->integratedPower + minus->integratedPower;
  if (!(sum > 0.0))
    throw AnalysisError("asymmetry undefined: both order powers are zero");
  return (plus->integratedPower - minus->integratedPower) / sum;
}

DiffractionReport measureOrders(const ComplexField& diffractionField,
                                const OrderAnalysisSettings& settings)
{
  const GridSpec& grid = diffractionField.grid();
  if (!(settings.boxHalfWidthFraction > 0.0 && settings.boxHalfWidthFraction <= 0.5))
    throw AnalysisError("order box half width must lie in (0, 0.5] of the order spacing");

  DiffractionReport report;
  report.orderSpacing = grid.wavelength * settings.focalLength / settings.period;
  report.boxHalfWidth = settings.boxHalfWidthFraction * report.orderSpacing;
  const double hw = report.boxHalfWidth;
  const RealField inten = intensity(diffractionField);
  const IntRange qRange{-settings.qMax, settings.qMax};

  for (const OrderLocation& loc :
       locateOrders(settings.period, grid.wavelength, settings.focalLength, settings.orders, &grid)) {
    OrderMeasurement m;
    m.order = loc.order;
    m.center = loc.center;
    const double slack = kEdgeSlack * grid.pitch;
    m.inGrid = loc.inGrid && loc.center.x - hw >= grid.xMin() - slack &&
               loc.center.x + hw <= grid.xMax() + slack && -hw >= grid.yMin() - slack &&
               hw <= grid.yMax() + slack;
    if (!m.inGrid) {
      report.orders.push_back(m);
      continue;
    }
    m.integratedPower = integrateBox(inten, m.center, hw);
    m.onAxisIntensity = sampleBilinear(inten, m.center);
    m.ring = ringRadius(inten, m.center, hw);
    if (m.ring.found)
      m.peakCount = countAzimuthalPeaks(inten, m.center, m.ring.radius, settings.peakProminence);

    try {
      const double r = bestWindingRadius(diffractionField, m.center, grid.pitch, 0.75 * hw);
      m.winding = phaseWinding(diffractionField, m.center, r);
    } catch (const AnalysisError& e) {
      m.windingError = e.what();
    }

    m.spectrum = azimuthalModeSpectrum(diffractionField, m.center, 0.0, hw, qRange);
    m.dominantQ = m.spectrum.dominantQ;
    m.dominantFraction = m.spectrum.fraction(m.dominantQ);
    report.orders.push_back(m);
  }

  for (int n = 1; n <= std::max(std::abs(settings.orders.min), std::abs(settings.orders.max)); ++n) {
    const OrderMeasurement* plus = report.find(n);
    const OrderMeasurement* minus = report.find(-n);
    if (!plus || !minus || !plus->inGrid || !minus->inGrid)
      continue;
    if (!(plus->integratedPower + minus->integratedPower > 0.0))
      continue;
    report.asymmetries.push_back(AsymmetryEntry{n, orderAsymmetry(report, n)});
  }
  return report;
}

} // namespace vortexsim
