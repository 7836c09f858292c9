#include "vortexsim/errors.hpp"
#include "vortexsim/scenario.hpp"

#include <map>
#include <utility>

namespace vortexsim
{

namespace
{

// Geometry notes shared by the bundled scenarios:
// - 200 kV electrons; the ideal lens has f = 1 m, so positions in the
//   diffraction plane are best read in units of the order spacing.
// - The grating period is not known, so each grating carries 40 periods
//   across a 30 um aperture (or the same pixel geometry scaled down).
// - Apertures stay within half the grid extent.

const char* const kFig1f = R"ini(
[scenario]
name = fig1f

; 1024 px grid, 512 px grating aperture, 12.8 px period (order spacing 80 px)
[grid]
nx = 1024
ny = 1024
pitch_nm = 58.59375
voltage_kv = 200

[beam]
source = plane
charges = 0

[grating]
enabled = true
period_um = 0.75
burgers = 1
radius_um = 15
duty = 0.5

[propagation]
method = lens-fourier
focal_length_m = 1

[analysis]
order_min = -3
order_max = 3

[output]
directory = out/fig1f
)ini";

// @NAME@ and @CHARGES@ are filled in per panel.
const char* const kFig2 = R"ini(
[scenario]
name = @NAME@

; 2048 px grid sized for the 20 um zone plate; the grating is 512 px across
; with a 12.8 px period (order spacing 160 px).
[grid]
nx = 2048
ny = 2048
pitch_nm = 19.53125
voltage_kv = 200

[beam]
source = vortex
charges = @CHARGES@
profile = uniform-disk
radius_um = 5

; Zone plate producing the incident vortex; 39 Fresnel zones fit the radius
; at this focal length. The check runs with the transmitted beam present.
[zone_plate]
enabled = true
focal_length_m = 1.0224
radius_um = 10
duty = 0.5
band_limit = 0.3
simulate_incident = true

[grating]
enabled = true
period_um = 0.25
burgers = 1
radius_um = 5
duty = 0.5

[propagation]
method = lens-fourier
focal_length_m = 1

[analysis]
order_min = -3
order_max = 3
q_max = 20

[output]
directory = out/@NAME@
)ini";

std::string fillFig2(const std::string& name, const std::string& charges)
{
  std::string text = kFig2;
  for (const auto& [key, value] : {std::pair<std::string, std::string>{"@NAME@", name}, {"@CHARGES@", charges}})
    for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos))
      text.replace(pos, key.size(), value);
  return text;
}

const char* const kFig3 = R"ini(
[scenario]
name = fig3

; 4096 px grid, 30 um grating (2048 px) with 40 periods (51.2 px, order
; spacing 80 px), illuminated by a 30 um vortex disk.
[grid]
nx = 4096
ny = 4096
pitch_nm = 14.6484375
voltage_kv = 200

[beam]
source = vortex
charges = 0, 1, -1
profile = uniform-disk
radius_um = 15

[grating]
enabled = true
period_um = 0.75
burgers = 1
radius_um = 15
duty = 0.5

[propagation]
method = lens-fourier
focal_length_m = 1

[analysis]
order_min = -7
order_max = 7
box_half_width = 0.3

[output]
directory = out/fig3
images = false
)ini";

const char* const kSorterDemo = R"ini(
[scenario]
name = sorter-demo

; 1024 px grid, 32 px period (order spacing 32 px), Gaussian input with a
; 48 px waist. Duty 0.3 keeps every order up to 6 bright.
[grid]
nx = 1024
ny = 1024
pitch_nm = 25
voltage_kv = 200

[beam]
source = vortex
charges = -5..5
profile = gaussian
radius_um = 1.2

[grating]
enabled = true
period_um = 0.8
burgers = 1
radius_um = 4.4
duty = 0.3

[propagation]
method = lens-fourier
focal_length_m = 1

[analysis]
order_min = -2
order_max = 2

[sorter]
enabled = true
pinhole_radius = 0.2
order_min = -6
order_max = 6

[output]
directory = out/sorter-demo
images = false
)ini";

const std::map<std::string, std::string>& scenarios()
{
  static const std::map<std::string, std::string> table{
    {"fig1f", kFig1f},
    {"fig2c", fillFig2("fig2c", "10")},
    {"fig2d", fillFig2("fig2d", "-10")},
    {"fig3", kFig3},
    {"sorter-demo", kSorterDemo},
  };
  return table;
}

} // namespace

std::vector<std::string> scenarioNames()
{
  std::vector<std::string> names;
  for (const auto& [name, text] : scenarios())
    names.push_back(name);
  return names;
}

std::string scenarioText(const std::string& name)
{
  const auto it = scenarios().find(name);
  if (it == scenarios().end()) {
    std::string list;
    for (const std::string& n : scenarioNames())
      list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("unknown scenario '" + name + "'; available: " + list);
  }
  return it->second;
}

RunReport reproduce(const std::string& name, const RunOptions& options)
{
  return runScenario(parseScenarioConfig(scenarioText(name)), options);
}

} // namespace vortexsim
