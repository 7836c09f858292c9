#include "doctest.h"

#include "support/helpers.hpp"

#include "vortexsim/errors.hpp"
#include "vortexsim/image_io.hpp"
#include "vortexsim/parallel.hpp"
#include "vortexsim/scenario.hpp"

#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <numbers>

using namespace vortexsim;

TEST_SUITE("scenario")
{
  TEST_CASE("plane wave through a forked grating has symmetric orders")
  {
    testing::TempDir dir;
    const ScenarioConfig c = parseScenarioConfig(testing::tinyConfig(dir.path().string()));
    const RunReport report = runScenario(c);
    REQUIRE(report.runs.size() == 1);
    const RunRecord& r = report.runs[0];
    REQUIRE(r.diffraction.has_value());
    for (const AsymmetryEntry& a : r.diffraction->asymmetries)
      CHECK(std::abs(a.value) < 1e-6);
    CHECK(r.diffraction->find(1)->dominantQ == 1);
    CHECK(r.diffraction->find(-1)->dominantQ == -1);
    // Half of the light that reaches the 60 px aperture gets through.
    const double aperture = std::numbers::pi * 60.0 * 60.0 / (256.0 * 256.0);
    CHECK(r.outputPower == doctest::Approx(r.inputPower * 0.5 * aperture).epsilon(0.02));

    for (const char* name : {"report.json", "config.ini", "orders.csv", "asymmetry.csv", "spectra.csv"})
      CHECK(std::filesystem::exists(dir.file(name)));
    const nlohmann::json j = nlohmann::json::parse(readFile(dir.file("report.json")));
    CHECK(j["scenario"] == "tiny");
    CHECK(j["runs"].size() == 1);
    CHECK(j["runs"][0]["charge"] == 0);
    CHECK(parseScenarioConfig(readFile(dir.file("config.ini"))).name == "tiny");
  }

  TEST_CASE("reports are byte-identical across runs")
  {
    testing::TempDir dir;
    ScenarioConfig c = parseScenarioConfig(testing::tinyConfig(dir.path().string()));
    c.beam.source = BeamSource::Vortex;
    c.beam.radiusUm = 0.5;
    c.beam.charges = {-1, 2};
    RunOptions options;
    options.artifacts = false;
    setThreadCount(1);
    const std::string first = renderReport(runScenario(c, options), false);
    const std::string second = renderReport(runScenario(c, options), false);
    CHECK(first == second);
    CHECK(first.find("timings_ms") == std::string::npos);
    CHECK(renderReport(runScenario(c, options), true).find("timings_ms") != std::string::npos);
  }

  TEST_CASE("sampling failures stop the run before any work")
  {
    testing::TempDir dir;
    ScenarioConfig c = parseScenarioConfig(testing::tinyConfig(dir.file("out")));
    c.grating.radiusUm = 1.2;
    CHECK_THROWS_AS(runScenario(c), SamplingError);
    CHECK_FALSE(std::filesystem::exists(dir.file("out")));
  }

  TEST_CASE("bundled scenarios")
  {
    const std::vector<std::string> names = scenarioNames();
    for (const char* expected : {"fig1f", "fig2c", "fig2d", "fig3", "sorter-demo"})
      CHECK(std::find(names.begin(), names.end(), expected) != names.end());
    for (const std::string& name : names) {
      const ScenarioConfig c = parseScenarioConfig(scenarioText(name));
      CHECK(c.name == name);
      CHECK((checkSampling(c).status != GuardStatus::Fail));
    }
    try {
      scenarioText("fig9");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      CHECK(what.find("fig9") != std::string::npos);
      CHECK(what.find("sorter-demo") != std::string::npos);
    }
  }

  TEST_CASE("fig1f shows ring-shaped first orders with unit OAM")
  {
    testing::TempDir dir;
    ScenarioConfig c = parseScenarioConfig(scenarioText("fig1f"));
    c.output.directory = dir.path().string();
    RunOptions options;
    options.artifacts = false;
    const RunReport report = runScenario(c, options);
    const DiffractionReport& d = *report.runs.at(0).diffraction;
    CHECK(d.find(1)->dominantQ == 1);
    CHECK(d.find(-1)->dominantQ == -1);
    CHECK(d.find(0)->dominantQ == 0);
    CHECK(d.find(1)->ring.found);
    CHECK_FALSE(d.find(0)->ring.found);
  }
}
