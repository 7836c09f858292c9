#include "doctest.h"

#include "support/helpers.hpp"

#include "vortexsim/config.hpp"
#include "vortexsim/errors.hpp"
#include "vortexsim/image_io.hpp"
#include "vortexsim/masks.hpp"
#include "vortexsim/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <limits>

using namespace vortexsim;

namespace
{

std::string errorOf(const std::string& text)
{
  try {
    parseScenarioConfig(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

} // namespace

TEST_SUITE("config")
{
  TEST_CASE("tiny config parses into the expected units")
  {
    const ScenarioConfig c = parseScenarioConfig(testing::tinyConfig("out/tiny"));
    CHECK(c.name == "tiny");
    const GridSpec g = c.gridSpec();
    CHECK(g.nx == 256);
    CHECK(g.pitch == doctest::Approx(10e-9).epsilon(1e-15));
    CHECK(g.wavelength == doctest::Approx(electronWavelength(200e3)).epsilon(1e-15));
    CHECK((c.beam.source == BeamSource::Plane));
    const ForkedGratingSpec s = c.gratingSpec();
    CHECK(s.period == doctest::Approx(0.08e-6).epsilon(1e-15));
    CHECK(s.apertureRadius == doctest::Approx(0.6e-6).epsilon(1e-15));
    CHECK((c.propagationPlan().method == PropagationMethod::LensFourier));
    CHECK(c.propagationPlan().distance == 1.0);
    CHECK(c.orderSettings().orders.min == -3);
  }

  TEST_CASE("echo round trip")
  {
    for (const std::string& name : scenarioNames()) {
      const ScenarioConfig c = parseScenarioConfig(scenarioText(name));
      const std::string echo = echoScenarioConfig(c);
      CHECK(echoScenarioConfig(parseScenarioConfig(echo)) == echo);
    }
  }

  TEST_CASE("charge lists and ranges")
  {
    const std::string base = testing::tinyConfig("o");
    auto charges = [&](const std::string& v) {
      std::string t = base;
      t.replace(t.find("charges = 0"), 11, "charges = " + v);
      return parseScenarioConfig(t).beam.charges;
    };
    CHECK(charges("-2..2") == std::vector<int>{-2, -1, 0, 1, 2});
    CHECK(charges("10, -10") == std::vector<int>{10, -10});
    CHECK_THROWS_AS(charges("3..1"), ConfigError);
    CHECK_THROWS_AS(charges("one"), ConfigError);
  }

  TEST_CASE("comments in both styles")
  {
    const std::string t = "# hash comment\n; semicolon comment\n" + testing::tinyConfig("o");
    CHECK(parseScenarioConfig(t).name == "tiny");
  }

  TEST_CASE("config errors name the offending key")
  {
    const std::string base = testing::tinyConfig("o");
    CHECK(errorOf(base + "[colour]\nx = 1\n").find("colour") != std::string::npos);
    std::string unknownKey = base;
    unknownKey.replace(unknownKey.find("duty = 0.5"), 10, "dooty = 0.5");
    CHECK(errorOf(unknownKey).find("dooty") != std::string::npos);

    std::string badNumber = base;
    badNumber.replace(badNumber.find("pitch_nm = 10"), 13, "pitch_nm = ten");
    CHECK(errorOf(badNumber).find("pitch_nm") != std::string::npos);

    std::string both = base;
    both.replace(both.find("voltage_kv = 200"), 16, "voltage_kv = 200\nwavelength_pm = 2.5");
    CHECK(errorOf(both).find("voltage_kv") != std::string::npos);

    CHECK_FALSE(errorOf("nx = 5\n" + base).empty());
    CHECK_FALSE(errorOf(base + "[grid]\nnx = 128\n").empty());

    std::string sorterWithoutLens = base;
    sorterWithoutLens.replace(sorterWithoutLens.find("method = lens-fourier"), 21, "method = angular-spectrum\ndistance_m = 0.01");
    CHECK(errorOf(sorterWithoutLens + "[sorter]\nenabled = true\n").find("sorter") != std::string::npos);

    CHECK_THROWS_AS(loadScenarioConfig("/nonexistent/vortexsim.ini"), IoError);
  }
}

TEST_SUITE("cli-io")
{
  TEST_CASE("complex PFM round trip is exact at float precision")
  {
    testing::TempDir dir;
    const GridSpec g{48, 32, 10e-9, 2.5e-12};
    const ComplexField f = testing::fieldFrom(g, [](double x, double y) { return Complex(std::sin(3e8 * x) + 0.1, 1e7 * y); });
    writeComplexPfm(dir.file("f.pfm"), f);
    const ComplexField back = readComplexPfm(dir.file("f.pfm"), g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(back.values()[k].real() == static_cast<double>(static_cast<float>(f.values()[k].real())));
      CHECK(back.values()[k].imag() == static_cast<double>(static_cast<float>(f.values()[k].imag())));
    }
    CHECK_THROWS_AS(readComplexPfm(dir.file("f.pfm"), GridSpec{32, 48, 10e-9, 2.5e-12}), ShapeError);
  }

  TEST_CASE("PFM header and byte order")
  {
    const PfmImage img{2, 1, 1, {1.0f, -2.5f}};
    const std::string bytes = encodePfm(img);
    CHECK(bytes.substr(0, 12) == "Pf\n2 1\n-1.0\n");
    CHECK(bytes.size() == 12 + 8);
    // 1.0f little endian: 00 00 80 3f
    CHECK(static_cast<unsigned char>(bytes[14]) == 0x80);
    CHECK(static_cast<unsigned char>(bytes[15]) == 0x3f);
    const PfmImage back = decodePfm(bytes);
    CHECK(back.data == img.data);

    // Big-endian file with a positive scale.
    std::string big = "Pf\n1 1\n1.0\n";
    big += std::string("\x3f\x80\x00\x00", 4);
    CHECK(decodePfm(big).data[0] == 1.0f);

    CHECK_THROWS_AS(decodePfm(std::string("P6\n1 1\n255\nabc")), IoError);
    CHECK_THROWS_AS(decodePfm(bytes.substr(0, 16)), IoError);
  }

  TEST_CASE("PBM mask has the grid dimensions and orientation")
  {
    testing::TempDir dir;
    const GridSpec g{40, 24, 10e-9, 2.5e-12};
    std::vector<std::uint8_t> open(g.size(), 0);
    open[g.index(3, 0)] = 1;  // bottom row
    open[g.index(39, 23)] = 1; // top row
    const BinaryMask mask(g, open, std::vector<std::uint8_t>(g.size(), 1));
    writeMask(mask, dir.file("m.pbm"));
    const PbmImage back = readPbm(dir.file("m.pbm"));
    CHECK(back.width == 40);
    CHECK(back.height == 24);
    CHECK(back.open == open);
    const std::string bytes = readFile(dir.file("m.pbm"));
    CHECK(bytes.substr(0, 9) == "P4\n40 24\n");
    // 5 bytes per row; the first stored row is the top one, open = white = 0.
    CHECK(bytes.size() == 9 + 5 * 24);
    CHECK(static_cast<unsigned char>(bytes[9 + 4]) == 0xfe);
  }

  TEST_CASE("PGM preview")
  {
    testing::TempDir dir;
    const GridSpec g = testing::grid(16);
    RealField f{g, std::vector<double>(g.size(), 0.0)};
    f.values[g.index(0, 15)] = 2.0;
    writePgm(dir.file("p.pgm"), f, 0.0, 2.0);
    const std::string bytes = readFile(dir.file("p.pgm"));
    CHECK(bytes.substr(0, 13) == "P5\n16 16\n255\n");
    CHECK(static_cast<unsigned char>(bytes[13]) == 255); // top-left
    CHECK(static_cast<unsigned char>(bytes[14]) == 0);
  }

  TEST_CASE("atomic writes leave no partial files")
  {
    testing::TempDir dir;
    writeFileAtomic(dir.file("a.txt"), "hello");
    CHECK(readFile(dir.file("a.txt")) == "hello");
    writeFileAtomic(dir.file("a.txt"), "bye");
    CHECK(readFile(dir.file("a.txt")) == "bye");
    int entries = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
      (void)e;
      ++entries;
    }
    CHECK(entries == 1);

    CHECK_THROWS_AS(writeFileAtomic(dir.file("missing/sub/a.txt"), "x"), IoError);
    CHECK_FALSE(std::filesystem::exists(dir.file("missing")));
    CHECK_THROWS_AS(readFile(dir.file("nothing")), IoError);
  }

  TEST_CASE("CSV and number formatting")
  {
    CHECK(formatNumber(200.0) == "200");
    CHECK(formatNumber(0.1) == "0.1");
    CHECK(formatNumber(2.5e-12) == "2.5e-12");
    for (double v : {1.0 / 3.0, -7.25e-300, 123456789.125, 6.02214076e23})
      CHECK(std::stod(formatNumber(v)) == v);
    CHECK(formatNumber(std::numeric_limits<double>::quiet_NaN()) == "nan");

    const CsvTable t{{"a", "b"}, {{"1", "2"}, {"3", "4"}}};
    CHECK(t.str() == "a,b\n1,2\n3,4\n");
  }
}
