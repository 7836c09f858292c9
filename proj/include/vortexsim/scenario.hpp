#ifndef VORTEXSIM_SCENARIO_HPP
#define VORTEXSIM_SCENARIO_HPP

#include "vortexsim/analysis.hpp"
#include "vortexsim/config.hpp"
#include "vortexsim/propagation.hpp"
#include "vortexsim/sorter.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vortexsim
{

/// Observables of a single beam about one center (no grating orders).
struct BeamAnalysis
{
  Point center{};
  double maxRadius = 0.0;
  OAMSpectrum spectrum{};
  std::optional<WindingResult> winding;
  std::string windingError;
  RingMeasurement ring{};
  int peakCount = 0;
};

/// Spectrum over [0, maxRadius], winding on the safest circle inside
/// 0.75 maxRadius, brightest ring and its peak count.
BeamAnalysis analyzeBeam(const ComplexField& field, Point center, double maxRadius, int qMax,
                         double peakProminence);

/// The zone plate that would produce the incident vortex, simulated from a
/// plane wave to its observation plane (transmitted beam included).
struct IncidentCheck
{
  int charge = 0;
  double distance = 0.0;
  SamplingReport sampling;
  BeamAnalysis analysis;
};

struct SortOutcome
{
  std::optional<SortResult> result;
  std::string error;          ///< set when the sort was ambiguous
  std::vector<int> candidates; ///< OAM estimates of the tied orders
  std::vector<int> candidateOrders;
};

/// Everything measured for one incident charge.
struct RunRecord
{
  int charge = 0;
  GridSpec outputGrid{};
  double inputPower = 0.0;
  double outputPower = 0.0;
  std::optional<DiffractionReport> diffraction;
  std::optional<BeamAnalysis> beam;
  std::optional<IncidentCheck> incident;
  std::optional<SortOutcome> sort;
  std::vector<std::pair<std::string, double>> timingsMs;
};

struct RunReport
{
  ScenarioConfig config;
  SamplingReport sampling;
  std::vector<RunRecord> runs;

  const RunRecord* find(int charge) const;
};

/// Which stages runScenario executes.
struct RunOptions
{
  bool diffraction = true; ///< grating, propagation and analysis
  bool incident = true;    ///< zone-plate check when the config asks for it
  bool sort = true;        ///< sorter when the config enables it
  bool artifacts = true;   ///< write files into config.output.directory
};

/// Input field of one run: vortex beam, plane wave, or plane wave through
/// the zone plate propagated to its observation plane.
ComplexField makeSourceField(const ScenarioConfig& config, int charge);

/// Grid of the plane the analysis sees.
GridSpec outputGrid(const ScenarioConfig& config);

/// Sampling diagnostics of the main propagation. Throws SamplingError when
/// a check fails.
SamplingReport checkSampling(const ScenarioConfig& config);

IncidentCheck simulateIncident(const ScenarioConfig& config, int charge);

/// Runs every charge of the config. Throws SamplingError before any work
/// when the sampling guard fails; analysis failures of single orders are
/// recorded in the report, and an ambiguous sort is recorded rather than
/// thrown.
RunReport runScenario(const ScenarioConfig& config, const RunOptions& options = {});

/// JSON text of the report. Keys keep a fixed order; timings are left out
/// when `timings` is false so two runs can be compared byte for byte.
std::string renderReport(const RunReport& report, bool timings = true);
void writeReport(const RunReport& report, const std::string& path);

/// Writes report.json, config.ini, the CSV tables and (when enabled) images
/// into config.output.directory.
void writeArtifacts(const RunReport& report);

/// Names of the bundled scenarios.
std::vector<std::string> scenarioNames();
/// INI text of a bundled scenario. Throws ConfigError listing the available
/// names for an unknown one.
std::string scenarioText(const std::string& name);
/// Parses and runs a bundled scenario.
RunReport reproduce(const std::string& name, const RunOptions& options = {});

} // namespace vortexsim

#endif
