// vortexsim: mask rendering, beam synthesis, diffraction, analysis and OAM
// sorting from INI scenario files.

#include "vortexsim/beam.hpp"
#include "vortexsim/errors.hpp"
#include "vortexsim/image_io.hpp"
#include "vortexsim/masks.hpp"
#include "vortexsim/parallel.hpp"
#include "vortexsim/scenario.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace
{

using namespace vortexsim;

struct GlobalOptions
{
  std::string config;
  std::string outDir;
  unsigned threads = 1;
  bool quiet = false;
};

ScenarioConfig loadConfig(const GlobalOptions& g)
{
  if (g.config.empty())
    throw ConfigError("this command needs --config FILE");
  ScenarioConfig c = loadScenarioConfig(g.config);
  if (!g.outDir.empty())
    c.output.directory = g.outDir;
  c.validate();
  return c;
}

std::string outFile(const ScenarioConfig& c, const std::string& name)
{
  std::filesystem::create_directories(c.output.directory);
  return (std::filesystem::path(c.output.directory) / name).string();
}

std::string windingText(const std::optional<WindingResult>& w)
{
  return w ? std::to_string(w->winding) : std::string("?");
}

void printBeam(std::ostream& os, const char* label, const BeamAnalysis& b)
{
  os << "  " << label << ": dominant_q=" << b.spectrum.dominantQ << " ("
     << formatNumber(b.spectrum.fraction(b.spectrum.dominantQ)) << ") winding=" << windingText(b.winding)
     << " ring_radius_m=" << formatNumber(b.ring.radius) << " peaks=" << b.peakCount << "\n";
}

void printSummary(std::ostream& os, const RunReport& report)
{
  os << "scenario " << report.config.name << " (sampling " << toString(report.sampling.status);
  if (report.sampling.status != GuardStatus::Pass)
    os << ": " << report.sampling.summary();
  os << ")\n";
  for (const RunRecord& r : report.runs) {
    os << "m=" << r.charge << "\n";
    if (r.diffraction) {
      for (const OrderMeasurement& o : r.diffraction->orders) {
        if (!o.inGrid) {
          os << "  order " << o.order << ": outside the grid\n";
          continue;
        }
        os << "  order " << o.order << ": P=" << formatNumber(o.integratedPower)
           << " dominant_q=" << o.dominantQ << " winding=" << windingText(o.winding)
           << " ring_radius_m=" << formatNumber(o.ring.radius) << " peaks=" << o.peakCount << "\n";
      }
      for (const AsymmetryEntry& a : r.diffraction->asymmetries)
        os << "  A" << a.order << "=" << formatNumber(a.value) << "\n";
    }
    if (r.beam)
      printBeam(os, "beam", *r.beam);
    if (r.incident)
      printBeam(os, "incident zone-plate focus", r.incident->analysis);
    if (r.sort) {
      if (r.sort->result)
        os << "  sort: m_hat=" << r.sort->result->mHat << " order=" << r.sort->result->bestOrder
           << " confidence=" << formatNumber(r.sort->result->confidence) << "\n";
      else
        os << "  sort: " << r.sort->error << "\n";
    }
  }
}

int cmdMask(const GlobalOptions& g)
{
  const ScenarioConfig c = loadConfig(g);
  const GridSpec grid = c.gridSpec();
  if (!c.grating.enabled && !c.zonePlate.enabled)
    throw ConfigError("neither [grating] nor [zone_plate] is enabled");
  if (c.grating.enabled) {
    const BinaryMask mask = renderForkedGrating(c.gratingSpec(), grid);
    const std::string path = outFile(c, "grating.pbm");
    writeMask(mask, path);
    if (!g.quiet)
      std::cout << path << " open fraction " << formatNumber(mask.openFraction()) << "\n";
  }
  if (c.zonePlate.enabled) {
    for (int m : c.beam.charges) {
      const BinaryMask mask = renderSpiralZonePlate(c.zonePlateSpec(m), grid);
      const std::string path = outFile(c, "zone_plate_m" + std::to_string(m) + ".pbm");
      writeMask(mask, path);
      if (!g.quiet)
        std::cout << path << " open fraction " << formatNumber(mask.openFraction()) << "\n";
    }
  }
  return 0;
}

int cmdBeam(const GlobalOptions& g)
{
  const ScenarioConfig c = loadConfig(g);
  checkSampling(c);
  for (int m : c.beam.charges) {
    const ComplexField field = makeSourceField(c, m);
    const std::string tag = "beam_m" + std::to_string(m);
    writeField(field, outFile(c, tag + ".pfm"), FieldFormat::Pfm);
    writeField(field, outFile(c, tag + ".pgm"), FieldFormat::Pgm);
    if (!g.quiet) {
      const GridSpec& grid = field.grid();
      const double radius = c.analysis.beamRadiusUm > 0.0 ? c.analysis.beamRadiusUm * 1e-6
                                                           : 0.25 * std::min(grid.extentX(), grid.extentY());
      std::cout << "m=" << m << " power=" << formatNumber(power(field)) << "\n";
      const Point center = c.beam.source == BeamSource::Vortex ? c.beamSpec(m).center : Point{};
      printBeam(std::cout, "beam", analyzeBeam(field, center, radius, c.analysis.qMax, c.analysis.peakProminence));
    }
  }
  return 0;
}

int runAndReport(const GlobalOptions& g, const ScenarioConfig& c, const RunOptions& options)
{
  const RunReport report = runScenario(c, options);
  if (!g.quiet)
    printSummary(std::cout, report);
  return 0;
}

int cmdDiffract(const GlobalOptions& g)
{
  RunOptions options;
  options.sort = false;
  return runAndReport(g, loadConfig(g), options);
}

int cmdAnalyze(const GlobalOptions& g, const std::string& fieldPath, const std::string& plane)
{
  const ScenarioConfig c = loadConfig(g);
  const bool diffractionPlane = plane == "output";
  const GridSpec grid = diffractionPlane ? outputGrid(c) : c.gridSpec();
  const ComplexField field = readComplexPfm(fieldPath, grid);

  RunReport report;
  report.config = c;
  RunRecord rec;
  rec.outputGrid = grid;
  rec.outputPower = power(field);
  if (diffractionPlane && c.grating.enabled && c.propagation.method == PropagationMethod::LensFourier) {
    rec.diffraction = measureOrders(field, c.orderSettings());
  } else {
    const double radius = c.analysis.beamRadiusUm > 0.0 ? c.analysis.beamRadiusUm * 1e-6
                                                         : 0.25 * std::min(grid.extentX(), grid.extentY());
    rec.beam = analyzeBeam(field, Point{}, radius, c.analysis.qMax, c.analysis.peakProminence);
  }
  report.runs.push_back(std::move(rec));
  writeReport(report, outFile(c, "analysis.json"));
  if (!g.quiet)
    printSummary(std::cout, report);
  return 0;
}

int cmdSort(const GlobalOptions& g, const std::string& fieldPath)
{
  ScenarioConfig c = loadConfig(g);
  if (!c.sorter.enabled)
    throw ConfigError("sort needs [sorter] enabled = true");

  RunReport report;
  if (fieldPath.empty()) {
    RunOptions options;
    options.diffraction = false;
    options.incident = false;
    report = runScenario(c, options);
  } else {
    report.config = c;
    RunRecord rec;
    const ComplexField input = readComplexPfm(fieldPath, c.gridSpec());
    rec.outputGrid = input.grid();
    rec.inputPower = power(input);
    SortOutcome outcome;
    try {
      outcome.result = sortOam(input, c.sorterConfig());
    } catch (const AmbiguousSortError& e) {
      outcome.error = e.what();
      outcome.candidates = {e.candidates[0], e.candidates[1]};
      outcome.candidateOrders = {e.orders[0], e.orders[1]};
    }
    rec.sort = std::move(outcome);
    report.runs.push_back(std::move(rec));
    writeReport(report, outFile(c, "sort.json"));
  }
  if (!g.quiet)
    printSummary(std::cout, report);
  for (const RunRecord& r : report.runs)
    if (r.sort && !r.sort->result) {
      std::cerr << "error: " << r.sort->error << "\n";
      return static_cast<int>(ExitCode::Analysis);
    }
  return 0;
}

int cmdReproduce(const GlobalOptions& g, const std::string& name, bool dumpConfig)
{
  const std::string text = scenarioText(name);
  ScenarioConfig c = parseScenarioConfig(text);
  if (!g.outDir.empty())
    c.output.directory = g.outDir;
  if (dumpConfig) {
    std::cout << echoScenarioConfig(c);
    return 0;
  }
  return runAndReport(g, c, RunOptions{});
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Vortex beam diffraction through forked gratings and spiral zone plates"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config, "Scenario INI file");
  app.add_option("--out-dir", g.outDir, "Output directory (overrides [output] directory)");
  app.add_option("--threads", g.threads, "Worker threads for row-parallel loops")
    ->check(CLI::Range(1u, 256u));
  app.add_flag("--quiet", g.quiet, "Print nothing on success");

  auto* mask = app.add_subcommand("mask", "Render the grating and zone plate masks as PBM");
  auto* beam = app.add_subcommand("beam", "Synthesize the input field of every charge");
  auto* diffract = app.add_subcommand("diffract", "Run the diffraction pipeline and write the report");

  std::string fieldPath;
  std::string plane = "output";
  auto* analyze = app.add_subcommand("analyze", "Analyze a complex field stored as PFM");
  analyze->add_option("--field", fieldPath, "Complex PFM written by this tool")->required();
  analyze->add_option("--plane", plane, "Plane the field belongs to")
    ->check(CLI::IsMember({"input", "output"}));

  std::string sortField;
  auto* sort = app.add_subcommand("sort", "Estimate the OAM of the input with the pinhole sorter");
  sort->add_option("--field", sortField, "Complex PFM on the input grid instead of the config beams");

  std::string scenario;
  bool dumpConfig = false;
  auto* reproduce = app.add_subcommand("reproduce", "Run a bundled scenario");
  reproduce->add_option("name", scenario, "Scenario name")->required();
  reproduce->add_flag("--dump-config", dumpConfig, "Print the resolved config and exit");

  std::ostringstream names;
  for (const std::string& n : scenarioNames())
    names << " " << n;
  reproduce->footer("Scenarios:" + names.str());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::Config);
  }

  try {
    setThreadCount(g.threads);
    if (mask->parsed())
      return cmdMask(g);
    if (beam->parsed())
      return cmdBeam(g);
    if (diffract->parsed())
      return cmdDiffract(g);
    if (analyze->parsed())
      return cmdAnalyze(g, fieldPath, plane);
    if (sort->parsed())
      return cmdSort(g, sortField);
    if (reproduce->parsed())
      return cmdReproduce(g, scenario, dumpConfig);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exitCode());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Io);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Internal);
  }
  return static_cast<int>(ExitCode::Internal);
}
