// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "support/oracles.hpp"

#include "vortexsim/analysis.hpp"
#include "vortexsim/beam.hpp"
#include "vortexsim/errors.hpp"
#include "vortexsim/masks.hpp"
#include "vortexsim/parallel.hpp"
#include "vortexsim/propagation.hpp"
#include "vortexsim/scenario.hpp"
#include "vortexsim/sorter.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

using namespace vortexsim;

namespace
{

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail)
{
  std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass)
    ++failures;
}

/// Runs one criterion; an exception counts as a failure with its message.
void criterion(int id, const std::string& title, const std::function<std::pair<bool, std::string>()>& body)
{
  try {
    const auto [pass, detail] = body();
    report(id, title, pass, detail);
  } catch (const std::exception& e) {
    report(id, title, false, std::string("threw: ") + e.what());
  }
}

double seconds(Clock::time_point since)
{
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string fmt(const char* format, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

RunOptions quiet()
{
  RunOptions o;
  o.artifacts = false;
  return o;
}

ScenarioConfig bundled(const std::string& name)
{
  return parseScenarioConfig(scenarioText(name));
}

const OrderMeasurement& order(const RunRecord& r, int n)
{
  const OrderMeasurement* o = r.diffraction ? r.diffraction->find(n) : nullptr;
  if (!o)
    throw AnalysisError("order " + std::to_string(n) + " missing for m = " + std::to_string(r.charge));
  return *o;
}

std::pair<bool, std::string> transferRule()
{
  const auto start = Clock::now();
  int cases = 0, good = 0;
  std::ostringstream bad;
  for (int b : {1, 2}) {
    ScenarioConfig c = bundled("fig1f");
    c.beam.source = BeamSource::Vortex;
    c.beam.profile = BeamProfile::UniformDisk;
    c.beam.radiusUm = c.grating.radiusUm;
    c.beam.charges = {-3, -2, -1, 0, 1, 2, 3};
    c.grating.burgers = b;
    c.analysis.qMax = 12;
    const RunReport rep = runScenario(c, quiet());
    for (const RunRecord& r : rep.runs)
      for (int n : {-3, -1, 1, 3}) {
        const OrderMeasurement& o = order(r, n);
        const int expected = r.charge + n * b;
        ++cases;
        if (o.winding && o.winding->winding == expected && o.dominantQ == expected)
          ++good;
        else
          bad << " (m=" << r.charge << ",b=" << b << ",n=" << n << ": q=" << o.dominantQ
              << " w=" << (o.winding ? std::to_string(o.winding->winding) : "?") << ")";
      }
  }
  const double elapsed = seconds(start);
  const bool pass = good == cases && elapsed < 120.0;
  return {pass, std::to_string(good) + "/" + std::to_string(cases) + " cases match m+nb on 1024^2 in " +
                  fmt("%.1f s", elapsed) + " (limit 120 s)" + bad.str()};
}

std::pair<bool, std::string> fig2Labels(RunReport& c, RunReport& d)
{
  c = reproduce("fig2c", quiet());
  d = reproduce("fig2d", quiet());
  const RunRecord& p = c.runs.at(0);
  const RunRecord& n = d.runs.at(0);
  bool pass = p.charge == 10 && n.charge == -10;
  pass = pass && order(p, 1).dominantQ == 11 && order(p, -1).dominantQ == 9;
  pass = pass && order(n, 1).dominantQ == -9 && order(n, -1).dominantQ == -11;

  std::ostringstream detail;
  detail << "m=10: q(+1)=" << order(p, 1).dominantQ << " q(-1)=" << order(p, -1).dominantQ
         << "; m=-10: q(+1)=" << order(n, 1).dominantQ << " q(-1)=" << order(n, -1).dominantQ;

  // Ring radius against |m_out| for every measured order of both panels.
  for (const RunReport* rep : {&c, &d}) {
    const RunRecord* r = &rep->runs.at(0);
    const int b = rep->config.grating.burgers;
    std::map<int, double> radius;
    // Orders extinct for the ideal grating hold only pixelization residue.
    const double duty = rep->config.grating.duty;
    for (const OrderMeasurement& o : r->diffraction->orders) {
      if (!o.inGrid || std::abs(gratingOrderAmplitude(duty, o.order)) < 1e-9)
        continue;
      if (!o.ring.found) {
        pass = false;
        detail << "; no ring in order " << o.order;
        continue;
      }
      radius[std::abs(r->charge + o.order * b)] = o.ring.radius;
    }
    double last = 0.0;
    detail << "; m=" << r->charge << " radii(um)";
    for (const auto& [mOut, rad] : radius) {
      detail << " " << mOut << ":" << fmt("%.3f", rad * 1e6);
      if (!(rad > last))
        pass = false;
      last = rad;
    }
  }
  return {pass, detail.str()};
}

} // namespace

int main()
{
  setThreadCount(1);
  const auto start = Clock::now();

  criterion(1, "OAM transfer rule", transferRule);

  RunReport fig2c, fig2d;
  criterion(2, "fig2c/fig2d order labels and ring ordering", [&] { return fig2Labels(fig2c, fig2d); });

  RunReport fig3;
  bool fig3Ready = false;
  auto runFig3 = [&] {
    if (!fig3Ready) {
      ScenarioConfig c = bundled("fig3");
      c.beam.charges = {0, 1, -1, 2, -2};
      fig3 = runScenario(c, quiet());
      fig3Ready = true;
    }
  };

  criterion(3, "even-order extinction", [&]() -> std::pair<bool, std::string> {
    bool exact = true;
    for (int n = 1; n <= 5; ++n)
      exact = exact && gratingOrderAmplitude(0.5, 2 * n) == 0.0;
    runFig3();
    const RunRecord& r = *fig3.find(0);
    const double ratio = order(r, 2).integratedPower / order(r, 1).integratedPower;
    const double ratio4 = order(r, 4).integratedPower / order(r, 1).integratedPower;
    return {exact && ratio < 1e-3 && ratio4 < 1e-3,
            "a(0.5, 2n) == 0 for n=1..5: " + std::string(exact ? "yes" : "no") + "; P2/P1 = " +
              fmt("%.3e", ratio) + ", P4/P1 = " + fmt("%.3e", ratio4) + " (limit 1e-3)"};
  });

  criterion(4, "fig3 order asymmetry bands", [&]() -> std::pair<bool, std::string> {
    runFig3();
    const RunRecord& plus = *fig3.find(1);
    const RunRecord& minus = *fig3.find(-1);
    auto diff = [](const RunRecord& r, int n) { return orderAsymmetry(*r.diffraction, n); };
    bool pass = true;
    std::ostringstream detail;
    // (P+ - P-) relative to their mean is 2A.
    const double d1 = 2.0 * std::abs(diff(plus, 1));
    const double d7 = 2.0 * std::abs(diff(plus, 7));
    pass = pass && d1 >= 2e-4 && d1 <= 1e-2 && d7 >= 5e-3 && d7 <= 5e-2;
    detail << "m=+1: |dI1| = " << fmt("%.3f%%", 100 * d1) << " in [0.02%, 1%], |dI7| = " << fmt("%.3f%%", 100 * d7)
           << " in [0.5%, 5%]; A1..A7 =";
    double last = 0.0;
    double flip = 0.0;
    for (int n : {1, 3, 5, 7}) {
      const double a = diff(plus, n);
      detail << " " << fmt("%.3e", a);
      if (!(std::abs(a) > last))
        pass = false;
      last = std::abs(a);
      flip = std::max(flip, std::abs(a + diff(minus, n)));
    }
    pass = pass && flip < 1e-6;
    detail << "; max |A(m) + A(-m)| = " << fmt("%.1e", flip) << " (limit 1e-6)";
    return {pass, detail.str()};
  });

  criterion(5, "near-equal first orders for |m| <= 2", [&]() -> std::pair<bool, std::string> {
    runFig3();
    double worst = 0.0;
    std::ostringstream detail;
    for (int m : {-2, -1, 0, 1, 2}) {
      const double a = orderAsymmetry(*fig3.find(m)->diffraction, 1);
      worst = std::max(worst, std::abs(a));
      detail << " A1(m=" << m << ")=" << fmt("%.2e", a);
    }
    return {worst < 0.01, "max |A1| = " + fmt("%.3e", worst) + " (limit 0.01);" + detail.str()};
  });

  criterion(6, "zone-plate focus shows 10 peaks", [&]() -> std::pair<bool, std::string> {
    bool pass = true;
    std::ostringstream detail;
    for (const RunReport* rep : {&fig2c, &fig2d}) {
      if (rep->runs.empty() || !rep->runs[0].incident)
        throw AnalysisError("the fig2c/fig2d runs carry no zone-plate check");
      const IncidentCheck& inc = *rep->runs[0].incident;
      pass = pass && inc.analysis.peakCount == 10;
      if (rep != &fig2c)
        detail << "; ";
      detail << "l=" << inc.charge << ": " << inc.analysis.peakCount << " peaks at prominence "
             << bundled("fig2c").analysis.peakProminence;
    }
    return {pass, detail.str()};
  });

  criterion(7, "pinhole sorter", [&]() -> std::pair<bool, std::string> {
    const RunReport rep = reproduce("sorter-demo", quiet());
    bool pass = rep.runs.size() == 11;
    double minConfidence = 1.0;
    int correct = 0;
    for (const RunRecord& r : rep.runs) {
      if (r.sort && r.sort->result && r.sort->result->mHat == r.charge) {
        ++correct;
        minConfidence = std::min(minConfidence, r.sort->result->confidence);
      } else {
        pass = false;
      }
    }
    pass = pass && minConfidence > 0.3;

    const ScenarioConfig c = bundled("sorter-demo");
    const ComplexField mix = normalize(add(makeSourceField(c, 2), makeSourceField(c, -2)));
    std::string ambiguity = "not raised";
    try {
      sortOam(mix, c.sorterConfig());
      pass = false;
    } catch (const AmbiguousSortError& e) {
      const int lo = std::min(e.candidates[0], e.candidates[1]);
      const int hi = std::max(e.candidates[0], e.candidates[1]);
      ambiguity = "raised with candidates " + std::to_string(lo) + ", " + std::to_string(hi);
      pass = pass && lo == -2 && hi == 2;
    }
    return {pass, std::to_string(correct) + "/11 m_hat = m, min confidence " + fmt("%.3f", minConfidence) +
                    " (limit 0.3); +-2 superposition: " + ambiguity};
  });

  criterion(8, "numerical hygiene", [&]() -> std::pair<bool, std::string> {
    std::ostringstream detail;
    bool pass = true;
    const GridSpec g{512, 512, 10e-9, electronWavelength(200e3)};

    // Parseval through the lens and through band-unlimited free space.
    const double w = 12 * g.pitch;
    const ComplexField lg = normalize(ComplexField(g, [&] {
      std::vector<Complex> v(g.size());
      for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
          const double r = std::hypot(g.x(i), g.y(j)) / w;
          v[g.index(i, j)] = r * r * std::exp(-r * r) * std::polar(1.0, 2 * std::atan2(g.y(j), g.x(i)));
        }
      return v;
    }()));
    const double parsevalLens = std::abs(power(lensFourierTransform(lg, 1.0)) - 1.0);
    const double parsevalFree = std::abs(power(angularSpectrumPropagate(lg, 0.05, 1.0)) - 1.0);
    pass = pass && parsevalLens < 1e-10 && parsevalFree < 1e-10;
    detail << "Parseval " << fmt("%.1e", std::max(parsevalLens, parsevalFree));

    // Forward and back.
    const double z = 0.037;
    const double roundTrip = relativeL2Difference(angularSpectrumPropagate(angularSpectrumPropagate(lg, z), -z), lg);
    pass = pass && roundTrip < 1e-9;
    detail << "; z/-z " << fmt("%.1e", roundTrip);

    // Airy first zero of a 128 px disk, located on a 1/20 px raster.
    {
      const GridSpec big{1024, 1024, 10e-9, g.wavelength};
      BeamSpec disk;
      disk.radius = 64 * big.pitch;
      const ComplexField far = lensFourierTransform(makeBeam(big, disk), 1.0);
      const RealField in = intensity(far);
      const double step = far.grid().pitch / 20.0;
      double zero = 0.0;
      for (int s = 1; s < 800; ++s) {
        const double a = sampleBilinear(in, Point{(s - 1) * step, 0.0});
        const double b = sampleBilinear(in, Point{s * step, 0.0});
        const double c = sampleBilinear(in, Point{(s + 1) * step, 0.0});
        if (b <= a && b <= c) {
          zero = s * step;
          break;
        }
      }
      const double expected = oracle::firstBesselJ1Zero() / std::numbers::pi * big.wavelength / (128 * big.pitch);
      const double offPx = std::abs(zero - expected) / far.grid().pitch;
      pass = pass && offPx <= 1.0;
      detail << "; Airy zero off by " << fmt("%.2f px", offPx);
    }

    // Gaussian width law.
    {
      BeamSpec gauss;
      gauss.profile = BeamProfile::Gaussian;
      gauss.radius = 12 * g.pitch;
      const ComplexField beam = makeBeam(g, gauss);
      const double zr = std::numbers::pi * gauss.radius * gauss.radius / g.wavelength;
      double worst = 0.0;
      for (double f : {1.0, 2.0, 3.0}) {
        const double width = oracle::secondMomentWidth(angularSpectrumPropagate(beam, f * zr));
        worst = std::max(worst, std::abs(width / oracle::gaussianWidth(gauss.radius, g.wavelength, f * zr) - 1.0));
      }
      pass = pass && worst < 0.01;
      detail << "; Gaussian width error " << fmt("%.2e", worst);
    }

    // Byte-identical reports at one thread.
    {
      ScenarioConfig c = bundled("fig1f");
      c.beam.source = BeamSource::Vortex;
      c.beam.radiusUm = c.grating.radiusUm;
      c.beam.charges = {1};
      const std::string first = renderReport(runScenario(c, quiet()), false);
      const std::string second = renderReport(runScenario(c, quiet()), false);
      pass = pass && first == second;
      detail << "; reports " << (first == second ? "identical" : "differ") << " (" << first.size() << " bytes)";
    }
    return {pass, detail.str()};
  });

  std::printf("%d of 8 criteria failed; %.1f s total\n", failures, seconds(start));
  return failures == 0 ? 0 : 1;
}
