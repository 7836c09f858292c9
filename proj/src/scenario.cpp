#include "vortexsim/scenario.hpp"

#include "vortexsim/beam.hpp"
#include "vortexsim/errors.hpp"
#include "vortexsim/image_io.hpp"
#include "vortexsim/masks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <system_error>

namespace vortexsim
{

namespace fs = std::filesystem;

namespace
{

constexpr double kUm = 1e-6;

class Stopwatch
{
public:
  double lapMs()
  {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - mStart).count();
    mStart = now;
    return ms;
  }

private:
  std::chrono::steady_clock::time_point mStart = std::chrono::steady_clock::now();
};

std::string chargeTag(int charge)
{
  return "m" + std::to_string(charge);
}

std::string outPath(const ScenarioConfig& config, const std::string& file)
{
  return (fs::path(config.output.directory) / file).string();
}

void ensureDirectory(const std::string& dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory '" + dir + "'" +
                  (ec ? ": " + ec.message() : std::string()));
}

/// Amplitude quick-look: sqrt of the intensity so weak orders stay visible.
void writeQuickLook(const std::string& path, const ComplexField& field)
{
  RealField amp = intensity(field);
  double peak = 0.0;
  for (double& v : amp.values) {
    v = std::sqrt(v);
    peak = std::max(peak, v);
  }
  writePgm(path, amp, 0.0, peak);
}

void mergeChecks(SamplingReport& into, const SamplingReport& from, const std::string& prefix)
{
  for (GuardCheck c : from.checks) {
    c.name = prefix + c.name;
    c.message = prefix + c.message;
    into.checks.push_back(std::move(c));
  }
  into.status = std::max(into.status, from.status);
}

PropagationPlan zonePlatePlan(const ScenarioConfig& config)
{
  return PropagationPlan{PropagationMethod::AngularSpectrum, config.zonePlateDistance(),
                         config.zonePlate.bandLimit};
}

double defaultBeamRadius(const ScenarioConfig& config, const GridSpec& grid)
{
  if (config.analysis.beamRadiusUm > 0.0)
    return config.analysis.beamRadiusUm * kUm;
  return 0.25 * std::min(grid.extentX(), grid.extentY());
}

} // namespace

const RunRecord* RunReport::find(int charge) const
{
  for (const RunRecord& r : runs)
    if (r.charge == charge)
      return &r;
  return nullptr;
}

BeamAnalysis analyzeBeam(const ComplexField& field, Point center, double maxRadius, int qMax,
                         double peakProminence)
{
  BeamAnalysis out;
  out.center = center;
  out.maxRadius = maxRadius;
  out.spectrum = azimuthalModeSpectrum(field, center, 0.0, maxRadius, IntRange{-qMax, qMax});
  try {
    const double r = bestWindingRadius(field, center, field.grid().pitch, 0.75 * maxRadius);
    out.winding = phaseWinding(field, center, r);
  } catch (const AnalysisError& e) {
    out.windingError = e.what();
  }
  const RealField inten = intensity(field);
  out.ring = ringRadius(inten, center, maxRadius);
  if (out.ring.found)
    out.peakCount = countAzimuthalPeaks(inten, center, out.ring.radius, peakProminence);
  return out;
}

ComplexField makeSourceField(const ScenarioConfig& config, int charge)
{
  const GridSpec grid = config.gridSpec();
  switch (config.beam.source) {
  case BeamSource::Vortex:
    return makeBeam(grid, config.beamSpec(charge));
  case BeamSource::Plane:
    return makePlaneWave(grid);
  case BeamSource::ZonePlate: {
    const BinaryMask plate = renderSpiralZonePlate(config.zonePlateSpec(charge), grid);
    const ComplexField lit = applyMask(makePlaneWave(grid), plate);
    return normalize(propagate(lit, zonePlatePlan(config)));
  }
  }
  throw ConfigError("unknown beam source");
}

GridSpec outputGrid(const ScenarioConfig& config)
{
  GridSpec grid = config.gridSpec();
  if (config.propagation.method == PropagationMethod::LensFourier)
    grid.pitch = grid.wavelength * config.propagation.focalLengthM /
                 (static_cast<double>(grid.nx) * grid.pitch);
  return grid;
}

SamplingReport checkSampling(const ScenarioConfig& config)
{
  const GridSpec grid = config.gridSpec();
  double aperture = 0.0;
  if (config.beam.source == BeamSource::Vortex)
    aperture = 2.0 * config.beam.radiusUm * kUm;
  if (config.grating.enabled)
    aperture = std::max(aperture, 2.0 * config.grating.radiusUm * kUm);
  std::optional<double> diameter;
  if (aperture > 0.0)
    diameter = aperture;

  SamplingReport report = samplingGuard(grid, config.propagationPlan(), diameter);
  if (config.zonePlate.enabled &&
      (config.beam.source == BeamSource::ZonePlate || config.zonePlate.simulateIncident))
    mergeChecks(report,
                samplingGuard(grid, zonePlatePlan(config), 2.0 * config.zonePlate.radiusUm * kUm),
                "zone plate ");
  if (report.status == GuardStatus::Fail)
    throw SamplingError("sampling guard failed: " + report.summary());
  return report;
}

IncidentCheck simulateIncident(const ScenarioConfig& config, int charge)
{
  const GridSpec grid = config.gridSpec();
  IncidentCheck check;
  check.charge = charge;
  check.distance = config.zonePlateDistance();
  const double radius = config.zonePlate.radiusUm * kUm;
  check.sampling = samplingGuard(grid, zonePlatePlan(config), 2.0 * radius);
  if (check.sampling.status == GuardStatus::Fail)
    throw SamplingError("zone plate sampling guard failed: " + check.sampling.summary());

  const BinaryMask plate = renderSpiralZonePlate(config.zonePlateSpec(charge), grid);
  const ComplexField focus = propagate(applyMask(makePlaneWave(grid), plate), zonePlatePlan(config));
  // Four first-order spot radii comfortably hold the vortex ring.
  const double maxRadius = 4.0 * grid.wavelength * check.distance / radius;
  check.analysis = analyzeBeam(focus, Point{}, maxRadius, config.analysis.qMax,
                               config.analysis.peakProminence);
  return check;
}

RunReport runScenario(const ScenarioConfig& config, const RunOptions& options)
{
  config.validate();
  RunReport report;
  report.config = config;
  report.sampling = checkSampling(config);

  const GridSpec grid = config.gridSpec();
  const PropagationPlan plan = config.propagationPlan();
  const bool writeImages = options.artifacts && config.output.images;
  if (options.artifacts)
    ensureDirectory(config.output.directory);

  std::optional<BinaryMask> grating;
  if (options.diffraction && config.grating.enabled) {
    grating = renderForkedGrating(config.gratingSpec(), grid);
    if (writeImages)
      writeMask(*grating, outPath(config, "grating.pbm"));
  }

  for (int charge : config.beam.charges) {
    RunRecord rec;
    rec.charge = charge;
    Stopwatch watch;

    const ComplexField source = makeSourceField(config, charge);
    rec.inputPower = power(source);
    rec.timingsMs.emplace_back("source", watch.lapMs());
    if (writeImages) {
      writeQuickLook(outPath(config, "input_" + chargeTag(charge) + ".pgm"), source);
      if (config.beam.source == BeamSource::ZonePlate)
        writeMask(renderSpiralZonePlate(config.zonePlateSpec(charge), grid),
                  outPath(config, "zone_plate_" + chargeTag(charge) + ".pbm"));
    }

    if (options.diffraction) {
      const ComplexField out = grating ? propagate(applyMask(source, *grating), plan)
                                       : propagate(source, plan);
      rec.outputGrid = out.grid();
      rec.outputPower = power(out);
      rec.timingsMs.emplace_back("propagate", watch.lapMs());

      if (grating && plan.method == PropagationMethod::LensFourier) {
        rec.diffraction = measureOrders(out, config.orderSettings());
      } else {
        Point center{};
        if (plan.method != PropagationMethod::LensFourier)
          center = config.beamSpec(charge).center;
        rec.beam = analyzeBeam(out, center, defaultBeamRadius(config, out.grid()),
                               config.analysis.qMax, config.analysis.peakProminence);
      }
      rec.timingsMs.emplace_back("analyze", watch.lapMs());

      if (writeImages) {
        const std::string tag = chargeTag(charge);
        writeRealPfm(outPath(config, "output_intensity_" + tag + ".pfm"), intensity(out));
        writeRealPfm(outPath(config, "output_phase_" + tag + ".pfm"), phase(out));
        writeQuickLook(outPath(config, "output_" + tag + ".pgm"), out);
        rec.timingsMs.emplace_back("images", watch.lapMs());
      }
    } else {
      rec.outputGrid = grid;
    }

    if (options.incident && config.zonePlate.simulateIncident) {
      rec.incident = simulateIncident(config, charge);
      rec.timingsMs.emplace_back("incident", watch.lapMs());
    }

    if (options.sort && config.sorter.enabled) {
      SortOutcome outcome;
      try {
        outcome.result = sortOam(source, config.sorterConfig());
      } catch (const AmbiguousSortError& e) {
        outcome.error = e.what();
        outcome.candidates = {e.candidates[0], e.candidates[1]};
        outcome.candidateOrders = {e.orders[0], e.orders[1]};
      }
      rec.sort = std::move(outcome);
      rec.timingsMs.emplace_back("sort", watch.lapMs());
    }

    report.runs.push_back(std::move(rec));
  }

  if (options.artifacts)
    writeArtifacts(report);
  return report;
}

} // namespace vortexsim
