#include "vortexsim/propagation.hpp"

#include "vortexsim/errors.hpp"
#include "vortexsim/fft.hpp"
#include "vortexsim/parallel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace vortexsim
{

std::string_view toString(PropagationMethod method)
{
  switch (method) {
  case PropagationMethod::AngularSpectrum:
    return "angular-spectrum";
  case PropagationMethod::FresnelTransfer:
    return "fresnel-transfer";
  case PropagationMethod::LensFourier:
    return "lens-fourier";
  }
  return "unknown";
}

PropagationMethod parsePropagationMethod(std::string_view name)
{
  if (name == "angular-spectrum")
    return PropagationMethod::AngularSpectrum;
  if (name == "fresnel-transfer")
    return PropagationMethod::FresnelTransfer;
  if (name == "lens-fourier")
    return PropagationMethod::LensFourier;
  throw ConfigError("unknown propagation method '" + std::string(name) +
                    "' (expected angular-spectrum, fresnel-transfer or lens-fourier)");
}

std::string_view toString(GuardStatus status)
{
  switch (status) {
  case GuardStatus::Pass:
    return "pass";
  case GuardStatus::Warn:
    return "warn";
  case GuardStatus::Fail:
    return "fail";
  }
  return "unknown";
}

void PropagationPlan::validate() const
{
  if (!std::isfinite(distance))
    throw DomainError("propagation distance must be finite");
  if (method == PropagationMethod::LensFourier && !(distance > 0.0))
    throw DomainError("lens focal length must be positive");
  if (!(bandLimit > 0.0 && bandLimit <= 1.0))
    throw DomainError("band limit must lie in (0, 1]");
}

namespace
{

// exp(i 2 pi z / lambda) with the integer number of cycles removed in
// extended precision.
Complex pistonPhase(double distance, double wavelength)
{
  const long double cycles =
    static_cast<long double>(distance) / static_cast<long double>(wavelength);
  const long double fraction = cycles - std::floor(cycles);
  return std::polar(1.0, static_cast<double>(2.0L * std::numbers::pi_v<long double> * fraction));
}

enum class Kernel
{
  Exact,
  Paraxial,
};

ComplexField transfer(const ComplexField& field, double distance, double bandLimit,
                      Kernel kernel)
{
  if (!std::isfinite(distance))
    throw DomainError("propagation distance must be finite");
  if (!(bandLimit > 0.0 && bandLimit <= 1.0))
    throw DomainError("band limit must lie in (0, 1]");
  if (distance == 0.0)
    return field;

  const GridSpec& grid = field.grid();
  const double lambda = grid.wavelength;
  const double k = 2.0 * std::numbers::pi / lambda;
  const double nyquist = 0.5 / grid.pitch;
  const double cutoff2 = (bandLimit * nyquist) * (bandLimit * nyquist);
  const Complex piston = pistonPhase(distance, lambda);
  const double dfx = 1.0 / grid.extentX();
  const double dfy = 1.0 / grid.extentY();
  const double norm = 1.0 / static_cast<double>(grid.size());

  std::vector<Complex> spectrum(field.values().begin(), field.values().end());
  fft2(spectrum, grid.nx, grid.ny, FftDirection::Forward);

  parallelRows(grid.ny, [&](std::size_t j) {
    const double fy = static_cast<double>(signedFrequencyIndex(j, grid.ny)) * dfy;
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double fx = static_cast<double>(signedFrequencyIndex(i, grid.nx)) * dfx;
      const double f2 = fx * fx + fy * fy;
      Complex& s = spectrum[grid.index(i, j)];
      if (f2 > cutoff2) {
        s = 0.0;
        continue;
      }
      const double a = lambda * lambda * f2; // sin^2 of the propagation angle
      Complex h;
      if (kernel == Kernel::Paraxial) {
        h = piston * std::polar(1.0, -std::numbers::pi * lambda * distance * f2);
      } else if (a <= 1.0) {
        // k_z - k, written without cancellation.
        const double dkz = -k * a / (1.0 + std::sqrt(1.0 - a));
        h = piston * std::polar(1.0, dkz * distance);
      } else if (distance > 0.0) {
        h = std::exp(-distance * k * std::sqrt(a - 1.0));
      } else {
        h = 0.0;
      }
      s *= h * norm;
    }
  });

  fft2(spectrum, grid.nx, grid.ny, FftDirection::Backward);
  return ComplexField(grid, std::move(spectrum));
}

} // namespace

ComplexField angularSpectrumPropagate(const ComplexField& field, double distance,
                                      double bandLimit)
{
  return transfer(field, distance, bandLimit, Kernel::Exact);
}

ComplexField fresnelTransferPropagate(const ComplexField& field, double distance,
                                      double bandLimit)
{
  return transfer(field, distance, bandLimit, Kernel::Paraxial);
}

ComplexField lensFourierTransform(const ComplexField& field, double focalLength)
{
  if (!(focalLength > 0.0) || !std::isfinite(focalLength))
    throw DomainError("lens focal length must be positive");
  const GridSpec& in = field.grid();
  if (in.nx != in.ny)
    throw ShapeError("lens transform needs a square grid");

  GridSpec out = in;
  out.pitch = in.wavelength * focalLength / (static_cast<double>(in.nx) * in.pitch);

  // 1/(i lambda f) times the pixel area turns the DFT into the Fraunhofer
  // integral; with the remapped pitch this conserves power.
  const Complex factor(0.0, -in.pitch * in.pitch / (in.wavelength * focalLength));
  std::vector<Complex> values = centeredFft2(field.values(), in.nx, in.ny, FftDirection::Forward);
  for (Complex& v : values)
    v *= factor;
  return ComplexField(out, std::move(values));
}

ComplexField propagate(const ComplexField& field, const PropagationPlan& plan)
{
  plan.validate();
  switch (plan.method) {
  case PropagationMethod::AngularSpectrum:
    return angularSpectrumPropagate(field, plan.distance, plan.bandLimit);
  case PropagationMethod::FresnelTransfer:
    return fresnelTransferPropagate(field, plan.distance, plan.bandLimit);
  case PropagationMethod::LensFourier:
    return lensFourierTransform(field, plan.distance);
  }
  throw ConfigError("unknown propagation method");
}

std::string SamplingReport::summary() const
{
  std::string out;
  for (const GuardCheck& c : checks) {
    if (c.status == GuardStatus::Pass)
      continue;
    if (!out.empty())
      out += "; ";
    out += c.message;
  }
  return out;
}

namespace
{

GuardCheck ratioCheck(std::string name, double ratio, double warnAt, std::string what)
{
  GuardCheck check{std::move(name), GuardStatus::Pass, ratio, {}};
  if (!(ratio <= 1.0))
    check.status = ratio <= warnAt ? GuardStatus::Warn : GuardStatus::Fail;
  std::ostringstream msg;
  msg << what << " (ratio " << ratio << " to bound)";
  check.message = msg.str();
  return check;
}

} // namespace

SamplingReport samplingGuard(const GridSpec& grid, const PropagationPlan& plan,
                             std::optional<double> apertureDiameter)
{
  grid.validate();
  plan.validate();
  SamplingReport report;

  if (plan.method != PropagationMethod::LensFourier && plan.distance != 0.0) {
    const double nu = plan.bandLimit * 0.5 / grid.pitch;
    const double s = grid.wavelength * nu;
    const double halfExtent = 0.5 * std::min(grid.extentX(), grid.extentY());
    double reach = INFINITY;
    if (s < 1.0)
      reach = std::abs(plan.distance) * s / std::sqrt(1.0 - s * s);
    report.checks.push_back(
      ratioCheck("kernel-aliasing", reach / halfExtent, 2.0,
                 "transfer kernel chirp aliasing: lateral walk-off lambda*z*nu/sqrt(1-(lambda*nu)^2) "
                 "must not exceed half the grid extent"));
  }

  if (apertureDiameter) {
    const double extent = std::min(grid.extentX(), grid.extentY());
    report.checks.push_back(ratioCheck("guard-band", *apertureDiameter / (0.5 * extent), 1.5,
                                       "guard band: aperture diameter must not exceed half the "
                                       "grid extent"));
  }

  for (const GuardCheck& c : report.checks)
    report.status = std::max(report.status, c.status);
  return report;
}

} // namespace vortexsim
