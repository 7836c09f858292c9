#include "vortexsim/config.hpp"

#include "vortexsim/errors.hpp"
#include "vortexsim/image_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace vortexsim
{

namespace pt = boost::property_tree;

namespace
{

constexpr double kNm = 1e-9;
constexpr double kUm = 1e-6;
constexpr double kPm = 1e-12;

const std::map<std::string, std::set<std::string>>& knownKeys()
{
  static const std::map<std::string, std::set<std::string>> keys{
    {"scenario", {"name"}},
    {"grid", {"nx", "ny", "pitch_nm", "voltage_kv", "wavelength_pm"}},
    {"beam",
     {"source", "charges", "profile", "radius_um", "inner_radius_um", "center_x_um",
      "center_y_um"}},
    {"zone_plate",
     {"enabled", "focal_length_m", "radius_um", "duty", "distance_m", "band_limit",
      "simulate_incident"}},
    {"grating",
     {"enabled", "period_um", "burgers", "radius_um", "duty", "center_x_um", "center_y_um"}},
    {"propagation", {"method", "focal_length_m", "distance_m", "band_limit"}},
    {"analysis",
     {"order_min", "order_max", "box_half_width", "q_max", "peak_prominence", "beam_radius_um"}},
    {"sorter",
     {"enabled", "pinhole_radius", "order_min", "order_max", "normalize_by_order_power",
      "ambiguity_threshold"}},
    {"output", {"directory", "images"}},
  };
  return keys;
}

std::string trim(std::string s)
{
  const auto notSpace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notSpace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notSpace).base(), s.end());
  return s;
}

class Reader
{
public:
  explicit Reader(const pt::ptree& tree) : mTree(tree) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) const
  {
    const auto sec = mTree.get_child_optional(section);
    if (!sec)
      return std::nullopt;
    const auto value = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!value)
      return std::nullopt;
    return trim(*value);
  }

  void text(const std::string& section, const std::string& key, std::string& out) const
  {
    if (auto v = raw(section, key))
      out = *v;
  }

  void number(const std::string& section, const std::string& key, double& out) const
  {
    if (auto v = raw(section, key))
      out = parseDouble(section, key, *v);
  }

  void number(const std::string& section, const std::string& key, std::optional<double>& out) const
  {
    if (auto v = raw(section, key))
      out = parseDouble(section, key, *v);
  }

  void integer(const std::string& section, const std::string& key, int& out) const
  {
    if (auto v = raw(section, key))
      out = parseInt(section, key, *v);
  }

  void count(const std::string& section, const std::string& key, std::size_t& out) const
  {
    if (auto v = raw(section, key)) {
      const int n = parseInt(section, key, *v);
      if (n <= 0)
        throw ConfigError(section + "." + key + " must be a positive integer");
      out = static_cast<std::size_t>(n);
    }
  }

  void flag(const std::string& section, const std::string& key, bool& out) const
  {
    auto v = raw(section, key);
    if (!v)
      return;
    std::string s = *v;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "true" || s == "yes" || s == "on" || s == "1")
      out = true;
    else if (s == "false" || s == "no" || s == "off" || s == "0")
      out = false;
    else
      throw ConfigError(section + "." + key + ": expected a boolean, got '" + *v + "'");
  }

  static double parseDouble(const std::string& section, const std::string& key,
                            const std::string& v)
  {
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used != v.size() || !std::isfinite(d))
        throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError(section + "." + key + ": expected a number, got '" + v + "'");
    }
  }

  static int parseInt(const std::string& section, const std::string& key, const std::string& v)
  {
    int out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end)
      throw ConfigError(section + "." + key + ": expected an integer, got '" + v + "'");
    return out;
  }

private:
  const pt::ptree& mTree;
};

// "0, 1, -1" or "-5..5"
std::vector<int> parseCharges(const std::string& v)
{
  std::vector<int> out;
  if (const auto dots = v.find(".."); dots != std::string::npos) {
    const int lo = Reader::parseInt("beam", "charges", trim(v.substr(0, dots)));
    const int hi = Reader::parseInt("beam", "charges", trim(v.substr(dots + 2)));
    if (hi < lo)
      throw ConfigError("beam.charges: empty range '" + v + "'");
    for (int m = lo; m <= hi; ++m)
      out.push_back(m);
    return out;
  }
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(Reader::parseInt("beam", "charges", trim(item)));
  if (out.empty())
    throw ConfigError("beam.charges: no charges given");
  return out;
}

BeamSource parseSource(const std::string& v)
{
  if (v == "vortex")
    return BeamSource::Vortex;
  if (v == "plane")
    return BeamSource::Plane;
  if (v == "zone-plate")
    return BeamSource::ZonePlate;
  throw ConfigError("beam.source: unknown source '" + v + "' (expected vortex, plane or zone-plate)");
}

} // namespace

std::string_view toString(BeamSource source)
{
  switch (source) {
  case BeamSource::Vortex:
    return "vortex";
  case BeamSource::Plane:
    return "plane";
  case BeamSource::ZonePlate:
    return "zone-plate";
  }
  return "unknown";
}

ScenarioConfig parseScenarioConfig(const std::string& text)
{
  // boost's INI reader only knows ';' comments.
  std::stringstream cleaned;
  {
    std::stringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      const std::string t = trim(line);
      if (!t.empty() && t.front() == '#')
        continue;
      cleaned << line << '\n';
    }
  }

  pt::ptree tree;
  try {
    pt::read_ini(cleaned, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' must belong to a section");
    const auto known = knownKeys().find(section);
    if (known == knownKeys().end())
      throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, value] : body) {
      (void)value;
      if (!known->second.count(key))
        throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
    }
  }

  const Reader r(tree);
  ScenarioConfig c;
  r.text("scenario", "name", c.name);

  r.count("grid", "nx", c.grid.nx);
  r.count("grid", "ny", c.grid.ny);
  r.number("grid", "pitch_nm", c.grid.pitchNm);
  const bool hasVoltage = r.raw("grid", "voltage_kv").has_value();
  const bool hasWavelength = r.raw("grid", "wavelength_pm").has_value();
  if (hasVoltage && hasWavelength)
    throw ConfigError("grid: give either voltage_kv or wavelength_pm, not both");
  if (hasWavelength) {
    c.grid.voltageKv.reset();
    r.number("grid", "wavelength_pm", c.grid.wavelengthPm);
  } else {
    r.number("grid", "voltage_kv", c.grid.voltageKv);
  }

  if (auto v = r.raw("beam", "source"))
    c.beam.source = parseSource(*v);
  if (auto v = r.raw("beam", "charges"))
    c.beam.charges = parseCharges(*v);
  if (auto v = r.raw("beam", "profile")) {
    try {
      c.beam.profile = parseBeamProfile(*v);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("beam.profile: ") + e.what());
    }
  }
  r.number("beam", "radius_um", c.beam.radiusUm);
  r.number("beam", "inner_radius_um", c.beam.innerRadiusUm);
  r.number("beam", "center_x_um", c.beam.centerXUm);
  r.number("beam", "center_y_um", c.beam.centerYUm);

  r.flag("zone_plate", "enabled", c.zonePlate.enabled);
  r.number("zone_plate", "focal_length_m", c.zonePlate.focalLengthM);
  r.number("zone_plate", "radius_um", c.zonePlate.radiusUm);
  r.number("zone_plate", "duty", c.zonePlate.duty);
  r.number("zone_plate", "distance_m", c.zonePlate.distanceM);
  r.number("zone_plate", "band_limit", c.zonePlate.bandLimit);
  r.flag("zone_plate", "simulate_incident", c.zonePlate.simulateIncident);

  r.flag("grating", "enabled", c.grating.enabled);
  r.number("grating", "period_um", c.grating.periodUm);
  r.integer("grating", "burgers", c.grating.burgers);
  r.number("grating", "radius_um", c.grating.radiusUm);
  r.number("grating", "duty", c.grating.duty);
  r.number("grating", "center_x_um", c.grating.centerXUm);
  r.number("grating", "center_y_um", c.grating.centerYUm);

  if (auto v = r.raw("propagation", "method"))
    c.propagation.method = parsePropagationMethod(*v);
  r.number("propagation", "focal_length_m", c.propagation.focalLengthM);
  r.number("propagation", "distance_m", c.propagation.distanceM);
  r.number("propagation", "band_limit", c.propagation.bandLimit);

  r.integer("analysis", "order_min", c.analysis.orderMin);
  r.integer("analysis", "order_max", c.analysis.orderMax);
  r.number("analysis", "box_half_width", c.analysis.boxHalfWidth);
  r.integer("analysis", "q_max", c.analysis.qMax);
  r.number("analysis", "peak_prominence", c.analysis.peakProminence);
  r.number("analysis", "beam_radius_um", c.analysis.beamRadiusUm);

  r.flag("sorter", "enabled", c.sorter.enabled);
  r.number("sorter", "pinhole_radius", c.sorter.pinholeRadius);
  r.integer("sorter", "order_min", c.sorter.orderMin);
  r.integer("sorter", "order_max", c.sorter.orderMax);
  r.flag("sorter", "normalize_by_order_power", c.sorter.normalizeByOrderPower);
  r.number("sorter", "ambiguity_threshold", c.sorter.ambiguityThreshold);

  r.text("output", "directory", c.output.directory);
  r.flag("output", "images", c.output.images);

  c.validate();
  return c;
}

ScenarioConfig loadScenarioConfig(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parseScenarioConfig(buffer.str());
}

void ScenarioConfig::validate() const
{
  if (!(grid.pitchNm > 0.0))
    throw ConfigError("grid.pitch_nm must be positive");
  if (grid.nx < 16 || grid.ny < 16)
    throw ConfigError("grid.nx and grid.ny must be at least 16");
  if (grid.voltageKv.has_value() == grid.wavelengthPm.has_value())
    throw ConfigError("grid: exactly one of voltage_kv and wavelength_pm is required");
  if (grid.voltageKv && !(*grid.voltageKv > 0.0))
    throw ConfigError("grid.voltage_kv must be positive");
  if (grid.wavelengthPm && !(*grid.wavelengthPm > 0.0))
    throw ConfigError("grid.wavelength_pm must be positive");
  if (beam.charges.empty())
    throw ConfigError("beam.charges: no charges given");
  if (beam.source == BeamSource::Vortex && !(beam.radiusUm > 0.0))
    throw ConfigError("beam.radius_um must be positive for a vortex source");
  if (beam.source == BeamSource::ZonePlate && !zonePlate.enabled)
    throw ConfigError("beam.source = zone-plate needs [zone_plate] enabled = true");
  if (zonePlate.simulateIncident && !zonePlate.enabled)
    throw ConfigError("zone_plate.simulate_incident needs zone_plate.enabled = true");
  if (zonePlate.enabled) {
    if (!(zonePlate.focalLengthM > 0.0) || !(zonePlate.radiusUm > 0.0))
      throw ConfigError("zone_plate.focal_length_m and radius_um must be positive");
    if (!(zonePlate.duty > 0.0 && zonePlate.duty < 1.0))
      throw ConfigError("zone_plate.duty must lie in (0, 1)");
    if (!(zonePlate.bandLimit > 0.0 && zonePlate.bandLimit <= 1.0))
      throw ConfigError("zone_plate.band_limit must lie in (0, 1]");
    if (!(zonePlate.distanceM >= 0.0))
      throw ConfigError("zone_plate.distance_m must not be negative");
  }
  if (grating.enabled) {
    if (!(grating.periodUm > 0.0) || !(grating.radiusUm > 0.0))
      throw ConfigError("grating.period_um and radius_um must be positive");
    if (!(grating.duty > 0.0 && grating.duty < 1.0))
      throw ConfigError("grating.duty must lie in (0, 1)");
  }
  if (propagation.method == PropagationMethod::LensFourier && !(propagation.focalLengthM > 0.0))
    throw ConfigError("propagation.focal_length_m must be positive");
  if (!(propagation.bandLimit > 0.0 && propagation.bandLimit <= 1.0))
    throw ConfigError("propagation.band_limit must lie in (0, 1]");
  if (analysis.orderMax < analysis.orderMin)
    throw ConfigError("analysis.order_min must not exceed order_max");
  if (!(analysis.boxHalfWidth > 0.0 && analysis.boxHalfWidth <= 0.5))
    throw ConfigError("analysis.box_half_width must lie in (0, 0.5]");
  if (analysis.qMax < 1)
    throw ConfigError("analysis.q_max must be at least 1");
  if (!(analysis.peakProminence > 0.0 && analysis.peakProminence < 1.0))
    throw ConfigError("analysis.peak_prominence must lie in (0, 1)");
  if (!(analysis.beamRadiusUm >= 0.0))
    throw ConfigError("analysis.beam_radius_um must not be negative");
  if (sorter.enabled) {
    if (!grating.enabled)
      throw ConfigError("the sorter needs [grating] enabled = true");
    if (propagation.method != PropagationMethod::LensFourier)
      throw ConfigError("the sorter needs propagation.method = lens-fourier");
    if (!(sorter.pinholeRadius > 0.0 && sorter.pinholeRadius < 0.5))
      throw ConfigError("sorter.pinhole_radius must lie in (0, 0.5) of the order spacing");
    if (sorter.orderMax < sorter.orderMin)
      throw ConfigError("sorter.order_min must not exceed order_max");
    // The focal plane spans (period / pitch) order spacings; every order
    // cell, half a spacing either side of its center, must fit.
    const double spacings = grating.periodUm * 1e3 / grid.pitchNm;
    const int reach = std::max(std::abs(sorter.orderMin), std::abs(sorter.orderMax));
    if (reach + 0.5 > 0.5 * spacings) {
      std::ostringstream msg;
      msg << "sorter orders up to |n| = " << reach << " do not fit the focal plane, which holds "
          << formatNumber(spacings) << " order spacings; keep |n| <= "
          << static_cast<int>(std::floor(0.5 * spacings - 0.5));
      throw ConfigError(msg.str());
    }
  }
  if (output.directory.empty())
    throw ConfigError("output.directory must not be empty");
}

double ScenarioConfig::wavelength() const
{
  if (grid.wavelengthPm)
    return *grid.wavelengthPm * kPm;
  return electronWavelength(*grid.voltageKv * 1e3);
}

GridSpec ScenarioConfig::gridSpec() const
{
  GridSpec g{grid.nx, grid.ny, grid.pitchNm * kNm, wavelength()};
  g.validate();
  return g;
}

BeamSpec ScenarioConfig::beamSpec(int charge) const
{
  BeamSpec spec;
  spec.charge = charge;
  spec.profile = beam.profile;
  spec.radius = beam.radiusUm * kUm;
  spec.innerRadius = beam.innerRadiusUm * kUm;
  spec.center = Point{beam.centerXUm * kUm, beam.centerYUm * kUm};
  return spec;
}

ForkedGratingSpec ScenarioConfig::gratingSpec() const
{
  ForkedGratingSpec spec;
  spec.period = grating.periodUm * kUm;
  spec.burgers = grating.burgers;
  spec.apertureRadius = grating.radiusUm * kUm;
  spec.duty = grating.duty;
  spec.center = Point{grating.centerXUm * kUm, grating.centerYUm * kUm};
  return spec;
}

SpiralZonePlateSpec ScenarioConfig::zonePlateSpec(int charge) const
{
  SpiralZonePlateSpec spec;
  spec.charge = charge;
  spec.focalLength = zonePlate.focalLengthM;
  spec.apertureRadius = zonePlate.radiusUm * kUm;
  spec.duty = zonePlate.duty;
  return spec;
}

double ScenarioConfig::zonePlateDistance() const
{
  return zonePlate.distanceM > 0.0 ? zonePlate.distanceM : zonePlate.focalLengthM;
}

PropagationPlan ScenarioConfig::propagationPlan() const
{
  PropagationPlan plan;
  plan.method = propagation.method;
  plan.distance = propagation.method == PropagationMethod::LensFourier ? propagation.focalLengthM
                                                                       : propagation.distanceM;
  plan.bandLimit = propagation.bandLimit;
  return plan;
}

OrderAnalysisSettings ScenarioConfig::orderSettings() const
{
  OrderAnalysisSettings s;
  s.period = grating.periodUm * kUm;
  s.focalLength = propagation.focalLengthM;
  s.orders = IntRange{analysis.orderMin, analysis.orderMax};
  s.boxHalfWidthFraction = analysis.boxHalfWidth;
  s.qMax = analysis.qMax;
  s.peakProminence = analysis.peakProminence;
  return s;
}

SorterConfig ScenarioConfig::sorterConfig() const
{
  SorterConfig s;
  s.grating = gratingSpec();
  s.focalLength = propagation.focalLengthM;
  s.pinholeRadius = sorter.pinholeRadius * wavelength() * propagation.focalLengthM / s.grating.period;
  s.orders = IntRange{sorter.orderMin, sorter.orderMax};
  s.normalizeByOrderPower = sorter.normalizeByOrderPower;
  s.ambiguityThreshold = sorter.ambiguityThreshold;
  return s;
}

std::string echoScenarioConfig(const ScenarioConfig& c)
{
  std::ostringstream o;
  auto flag = [](bool b) { return b ? "true" : "false"; };

  o << "[scenario]\nname = " << c.name << "\n\n";

  o << "[grid]\nnx = " << c.grid.nx << "\nny = " << c.grid.ny << "\npitch_nm = " << formatNumber(c.grid.pitchNm)
    << "\n";
  if (c.grid.voltageKv)
    o << "voltage_kv = " << formatNumber(*c.grid.voltageKv) << "\n";
  if (c.grid.wavelengthPm)
    o << "wavelength_pm = " << formatNumber(*c.grid.wavelengthPm) << "\n";
  o << "\n";

  o << "[beam]\nsource = " << toString(c.beam.source) << "\ncharges = ";
  for (std::size_t k = 0; k < c.beam.charges.size(); ++k)
    o << (k ? ", " : "") << c.beam.charges[k];
  o << "\nprofile = " << toString(c.beam.profile) << "\nradius_um = " << formatNumber(c.beam.radiusUm)
    << "\ninner_radius_um = " << formatNumber(c.beam.innerRadiusUm) << "\ncenter_x_um = " << formatNumber(c.beam.centerXUm)
    << "\ncenter_y_um = " << formatNumber(c.beam.centerYUm) << "\n\n";

  o << "[zone_plate]\nenabled = " << flag(c.zonePlate.enabled)
    << "\nfocal_length_m = " << formatNumber(c.zonePlate.focalLengthM) << "\nradius_um = " << formatNumber(c.zonePlate.radiusUm)
    << "\nduty = " << formatNumber(c.zonePlate.duty) << "\ndistance_m = " << formatNumber(c.zonePlate.distanceM)
    << "\nband_limit = " << formatNumber(c.zonePlate.bandLimit)
    << "\nsimulate_incident = " << flag(c.zonePlate.simulateIncident) << "\n\n";

  o << "[grating]\nenabled = " << flag(c.grating.enabled) << "\nperiod_um = " << formatNumber(c.grating.periodUm)
    << "\nburgers = " << c.grating.burgers << "\nradius_um = " << formatNumber(c.grating.radiusUm)
    << "\nduty = " << formatNumber(c.grating.duty) << "\ncenter_x_um = " << formatNumber(c.grating.centerXUm)
    << "\ncenter_y_um = " << formatNumber(c.grating.centerYUm) << "\n\n";

  o << "[propagation]\nmethod = " << toString(c.propagation.method)
    << "\nfocal_length_m = " << formatNumber(c.propagation.focalLengthM)
    << "\ndistance_m = " << formatNumber(c.propagation.distanceM)
    << "\nband_limit = " << formatNumber(c.propagation.bandLimit) << "\n\n";

  o << "[analysis]\norder_min = " << c.analysis.orderMin << "\norder_max = " << c.analysis.orderMax
    << "\nbox_half_width = " << formatNumber(c.analysis.boxHalfWidth) << "\nq_max = " << c.analysis.qMax
    << "\npeak_prominence = " << formatNumber(c.analysis.peakProminence)
    << "\nbeam_radius_um = " << formatNumber(c.analysis.beamRadiusUm) << "\n\n";

  o << "[sorter]\nenabled = " << flag(c.sorter.enabled) << "\npinhole_radius = " << formatNumber(c.sorter.pinholeRadius)
    << "\norder_min = " << c.sorter.orderMin << "\norder_max = " << c.sorter.orderMax
    << "\nnormalize_by_order_power = " << flag(c.sorter.normalizeByOrderPower)
    << "\nambiguity_threshold = " << formatNumber(c.sorter.ambiguityThreshold) << "\n\n";

  o << "[output]\ndirectory = " << c.output.directory << "\nimages = " << flag(c.output.images) << "\n";
  return o.str();
}

} // namespace vortexsim
