#include "vortexsim/sorter.hpp"

#include "vortexsim/errors.hpp"
#include "vortexsim/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vortexsim
{

void SorterConfig::validate(double wavelength) const
{
  if (grating.burgers == 0)
    throw ConfigError("sorter grating needs a non-zero Burgers vector");
  if (orders.max < orders.min)
    throw ConfigError("sorter order range is empty");
  if (!(focalLength > 0.0))
    throw ConfigError("sorter focal length must be positive");
  if (!(pinholeRadius > 0.0))
    throw ConfigError("pinhole radius must be positive");
  if (!(grating.period > 0.0))
    throw ConfigError("sorter grating period must be positive");
  const double spacing = wavelength * focalLength / grating.period;
  if (!(pinholeRadius < 0.5 * spacing)) {
    std::ostringstream msg;
    msg << "pinhole radius " << pinholeRadius << " m overlaps the adjacent order (spacing "
        << spacing << " m)";
    throw ConfigError(msg.str());
  }
  if (!(ambiguityThreshold >= 0.0 && ambiguityThreshold < 1.0))
    throw ConfigError("ambiguity threshold must lie in [0, 1)");
}

double pinholeTransmission(const ComplexField& field, Point center, double radius)
{
  const GridSpec& grid = field.grid();
  if (!(radius > 0.0))
    throw AnalysisError("pinhole radius must be positive");
  const double half = 0.5 * grid.pitch;
  if (center.x - radius < grid.xMin() - half || center.x + radius > grid.xMax() + half ||
      center.y - radius < grid.yMin() - half || center.y + radius > grid.yMax() + half) {
    std::ostringstream msg;
    msg << "pinhole of radius " << radius << " m about (" << center.x << ", " << center.y
        << ") m is clipped by the grid";
    throw AnalysisError(msg.str());
  }

  const double total = power(field) / grid.pixelArea();
  if (!(total > 0.0))
    throw AnalysisError("pinhole transmission of a zero field is undefined");

  constexpr int kSub = 16;
  const double diag = std::sqrt(0.5) * grid.pitch;
  const auto iLo = static_cast<std::size_t>(std::max(0.0, std::floor(grid.column(center.x - radius))));
  const auto jLo = static_cast<std::size_t>(std::max(0.0, std::floor(grid.row(center.y - radius))));
  const auto iHi = std::min(grid.nx - 1, static_cast<std::size_t>(std::ceil(grid.column(center.x + radius))));
  const auto jHi = std::min(grid.ny - 1, static_cast<std::size_t>(std::ceil(grid.row(center.y + radius))));

  double inside = 0.0;
  for (std::size_t j = jLo; j <= jHi; ++j) {
    const double dy = grid.y(j) - center.y;
    for (std::size_t i = iLo; i <= iHi; ++i) {
      const double dx = grid.x(i) - center.x;
      const double r = std::hypot(dx, dy);
      double coverage = 0.0;
      if (r <= radius - diag) {
        coverage = 1.0;
      } else if (r < radius + diag) {
        int hits = 0;
        for (int sj = 0; sj < kSub; ++sj) {
          const double sy = dy + ((sj + 0.5) / kSub - 0.5) * grid.pitch;
          for (int si = 0; si < kSub; ++si) {
            const double sx = dx + ((si + 0.5) / kSub - 0.5) * grid.pitch;
            hits += (sx * sx + sy * sy <= radius * radius) ? 1 : 0;
          }
        }
        coverage = static_cast<double>(hits) / (kSub * kSub);
      }
      if (coverage > 0.0)
        inside += coverage * std::norm(field.at(i, j));
    }
  }
  return inside / total;
}

SortResult sortOam(const ComplexField& input, const SorterConfig& config)
{
  config.validate(input.grid().wavelength);
  if (!(power(input) > 0.0))
    throw DomainError("sorter input has zero power");

  const BinaryMask mask = renderForkedGrating(config.grating, input.grid());
  const ComplexField focal = lensFourierTransform(applyMask(input, mask), config.focalLength);

  const double wavelength = input.grid().wavelength;
  const double spacing = wavelength * config.focalLength / config.grating.period;
  const RealField focalIntensity = intensity(focal);
  const double total = power(focal);
  // Cells of neighboring orders share their edge pixels; slightly shrink
  // the cell so each pixel belongs to one order.
  const double cellHalfWidth = 0.5 * spacing - 1e-3 * focal.grid().pitch;

  SortResult result;
  for (const OrderLocation& loc :
       locateOrders(config.grating.period, wavelength, config.focalLength, config.orders)) {
    OrderTransmission t;
    t.order = loc.order;
    t.raw = pinholeTransmission(focal, loc.center, config.pinholeRadius);
    t.orderPower = integrateBox(focalIntensity, loc.center, cellHalfWidth) / total;
    if (!config.normalizeByOrderPower)
      t.score = t.raw;
    else
      t.score = t.orderPower > 0.0 ? t.raw / t.orderPower : 0.0;
    result.perOrder.push_back(t);
  }

  std::vector<OrderTransmission> ranked = result.perOrder;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const OrderTransmission& a, const OrderTransmission& b) { return a.score > b.score; });
  double sum = 0.0;
  for (const OrderTransmission& t : ranked)
    sum += t.score;
  if (!(sum > 0.0))
    throw AnalysisError("no pinhole transmits any power");

  const int b = config.grating.burgers;
  const OrderTransmission& top = ranked.front();
  if (ranked.size() > 1) {
    const OrderTransmission& second = ranked[1];
    if (top.score - second.score <= config.ambiguityThreshold * top.score) {
      std::ostringstream msg;
      msg << "ambiguous OAM: orders " << top.order << " and " << second.order
          << " transmit within " << config.ambiguityThreshold * 100.0
          << "% of each other (m = " << -top.order * b << " or " << -second.order * b << ")";
      throw AmbiguousSortError(msg.str(), top.order, second.order, -top.order * b,
                               -second.order * b);
    }
  }
  result.bestOrder = top.order;
  result.mHat = -top.order * b;
  result.confidence = top.score / sum;
  return result;
}

} // namespace vortexsim
