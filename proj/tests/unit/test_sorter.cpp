#include "doctest.h"

#include "support/helpers.hpp"

#include "vortexsim/analysis.hpp"
#include "vortexsim/errors.hpp"
#include "vortexsim/masks.hpp"
#include "vortexsim/propagation.hpp"
#include "vortexsim/sorter.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace vortexsim;

namespace
{

// Geometry of the bundled sorter demo: 32 px period, 48 px waist.
const GridSpec kGrid{1024, 1024, 25e-9, 2.508e-12};

SorterConfig sorter(double pinholeFraction = 0.2)
{
  SorterConfig c;
  c.grating = ForkedGratingSpec{32 * kGrid.pitch, 1, 176 * kGrid.pitch, 0.3, {}};
  c.focalLength = 1.0;
  c.pinholeRadius = pinholeFraction * kGrid.wavelength * c.focalLength / c.grating.period;
  c.orders = IntRange{-6, 6};
  return c;
}

ComplexField beam(int m, Point center = {})
{
  return testing::vortex(kGrid, m, 48 * kGrid.pitch, BeamProfile::Gaussian, center);
}

} // namespace

TEST_SUITE("sorter")
{
  TEST_CASE("pinhole transmission bounds")
  {
    const GridSpec g = testing::grid(128);
    const ComplexField b = testing::vortex(g, 2, 20 * g.pitch);
    CHECK(pinholeTransmission(b, Point{}, 50 * g.pitch) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pinholeTransmission(b, Point{}, 2 * g.pitch) < pinholeTransmission(b, Point{}, 5 * g.pitch));
    CHECK_THROWS_AS(pinholeTransmission(b, Point{}, 70 * g.pitch), AnalysisError);
    CHECK_THROWS_AS(pinholeTransmission(b, Point{}, 0.0), AnalysisError);
    CHECK_THROWS_AS(pinholeTransmission(ComplexField::zeros(g), Point{}, 5 * g.pitch), AnalysisError);
  }

  TEST_CASE("pinhole rim pixels are weighted by covered area")
  {
    const GridSpec g = testing::grid(64);
    const ComplexField flat = makePlaneWave(g);
    const double r = 7.3 * g.pitch;
    const double expected = std::numbers::pi * r * r / (g.extentX() * g.extentY());
    CHECK(pinholeTransmission(flat, Point{}, r) == doctest::Approx(expected).epsilon(2e-3));
  }

  TEST_CASE("pinhole on a vortex focus passes almost nothing")
  {
    const GridSpec g = testing::grid(512);
    for (int m : {1, -2, 3}) {
      const ComplexField far = lensFourierTransform(testing::vortex(g, m, 100 * g.pitch), 1.0);
      const double ring = ringRadius(intensity(far), Point{}, 40 * far.grid().pitch).radius;
      REQUIRE(ring > 0.0);
      CHECK(pinholeTransmission(far, Point{}, 0.1 * ring) < 1e-4);
    }
  }

  TEST_CASE("sorter recovers the charge of pure vortices")
  {
    const SorterConfig c = sorter();
    for (int m = -5; m <= 5; ++m) {
      const SortResult r = sortOam(beam(m), c);
      CHECK(r.mHat == m);
      CHECK(r.bestOrder == -m);
      CHECK(r.confidence > 0.3);
      CHECK(r.perOrder.size() == 13);
      // The zero-OAM order maximizes the score.
      for (const OrderTransmission& t : r.perOrder)
        CHECK(t.score <= r.perOrder[static_cast<std::size_t>(r.bestOrder + 6)].score);
    }
  }

  TEST_CASE("chosen order carries zero OAM")
  {
    const SorterConfig c = sorter();
    for (int m : {-3, 2}) {
      const ComplexField in = beam(m);
      const SortResult r = sortOam(in, c);
      const ComplexField far =
        lensFourierTransform(applyMask(in, renderForkedGrating(c.grating, kGrid)), c.focalLength);
      OrderAnalysisSettings s;
      s.period = c.grating.period;
      s.focalLength = c.focalLength;
      s.orders = IntRange{-4, 4};
      s.qMax = 10;
      const DiffractionReport rep = measureOrders(far, s);
      CHECK(rep.find(r.bestOrder)->dominantQ == 0);
      CHECK(rep.find(r.bestOrder + 1)->dominantQ == c.grating.burgers);
    }
  }

  TEST_CASE("equal superposition is ambiguous")
  {
    const ComplexField mix = normalize(add(beam(2), beam(-2)));
    try {
      sortOam(mix, sorter());
      FAIL("expected AmbiguousSortError");
    } catch (const AmbiguousSortError& e) {
      CHECK(std::min(e.candidates[0], e.candidates[1]) == -2);
      CHECK(std::max(e.candidates[0], e.candidates[1]) == 2);
      CHECK(std::string(e.what()).find("ambiguous") != std::string::npos);
    }
  }

  TEST_CASE("smaller pinholes discriminate better")
  {
    for (int m : {-5, 0, 3}) {
      double last = 0.0;
      for (double fraction : {0.4, 0.3, 0.2, 0.1}) {
        const SortResult r = sortOam(beam(m), sorter(fraction));
        CHECK(r.confidence > last);
        last = r.confidence;
      }
    }
  }

  TEST_CASE("sorter tolerates small beam offsets")
  {
    std::mt19937 rng(20);
    std::uniform_real_distribution<double> offset(-2.0, 2.0);
    std::uniform_int_distribution<int> charge(-3, 3);
    const SorterConfig c = sorter();
    for (int trial = 0; trial < 20; ++trial) {
      const int m = charge(rng);
      const Point p{offset(rng) * kGrid.pitch, offset(rng) * kGrid.pitch};
      CHECK(sortOam(beam(m, p), c).mHat == m);
    }
  }

  TEST_CASE("sorter validation")
  {
    const double lambda = kGrid.wavelength;
    SorterConfig c = sorter();
    CHECK_NOTHROW(c.validate(lambda));
    c.grating.burgers = 0;
    CHECK_THROWS_AS(c.validate(lambda), ConfigError);
    c = sorter();
    c.pinholeRadius = 0.5 * lambda * c.focalLength / c.grating.period;
    CHECK_THROWS_AS(c.validate(lambda), ConfigError);
    c = sorter();
    c.pinholeRadius = 0.0;
    CHECK_THROWS_AS(c.validate(lambda), ConfigError);
    c = sorter();
    c.orders = IntRange{2, 1};
    CHECK_THROWS_AS(c.validate(lambda), ConfigError);
    CHECK_THROWS_AS(sortOam(ComplexField::zeros(kGrid), sorter()), DomainError);
  }
}
