#ifndef VORTEXSIM_CONFIG_HPP
#define VORTEXSIM_CONFIG_HPP

#include "vortexsim/analysis.hpp"
#include "vortexsim/beam.hpp"
#include "vortexsim/masks.hpp"
#include "vortexsim/propagation.hpp"
#include "vortexsim/sorter.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vortexsim
{

enum class BeamSource
{
  Vortex,    ///< makeBeam with [beam] parameters
  Plane,     ///< uniform field over the whole grid
  ZonePlate, ///< plane wave through the [zone_plate] mask, propagated to its observation plane
};

std::string_view toString(BeamSource source);

/// A scenario as written in the INI file. Values are kept in the units that
/// appear in the key names (pitch_nm, radius_um, ...), so echoing a resolved
/// config and parsing it again reproduces it exactly.
struct ScenarioConfig
{
  std::string name = "custom";

  struct Grid
  {
    std::size_t nx = 2048;
    std::size_t ny = 2048;
    double pitchNm = 0.0;
    std::optional<double> voltageKv = 200.0;
    std::optional<double> wavelengthPm;
  } grid;

  struct Beam
  {
    BeamSource source = BeamSource::Vortex;
    std::vector<int> charges{0};
    BeamProfile profile = BeamProfile::UniformDisk;
    double radiusUm = 0.0;
    double innerRadiusUm = 0.0;
    double centerXUm = 0.0;
    double centerYUm = 0.0;
  } beam;

  /// The plate's topological charge is the charge of the run it serves.
  struct ZonePlate
  {
    bool enabled = false;
    double focalLengthM = 1.0;
    double radiusUm = 10.0;
    double duty = 0.5;
    /// Observation plane behind the plate; 0 means the first-order focus.
    double distanceM = 0.0;
    double bandLimit = 0.3;
    /// With a vortex source, also simulate the plate's focus as a check of
    /// the incident beam.
    bool simulateIncident = false;
  } zonePlate;

  struct Grating
  {
    bool enabled = false;
    double periodUm = 0.0;
    int burgers = 1;
    double radiusUm = 0.0;
    double duty = 0.5;
    double centerXUm = 0.0;
    double centerYUm = 0.0;
  } grating;

  struct Propagation
  {
    PropagationMethod method = PropagationMethod::LensFourier;
    double focalLengthM = 1.0; ///< lens-fourier
    double distanceM = 0.0;    ///< transfer methods
    double bandLimit = 0.95;
  } propagation;

  struct Analysis
  {
    int orderMin = -3;
    int orderMax = 3;
    double boxHalfWidth = 0.3; ///< fraction of the order spacing
    int qMax = 20;
    double peakProminence = 0.1;
    /// Outer radius of the beam analysis when there are no orders; 0 picks a
    /// quarter of the grid extent.
    double beamRadiusUm = 0.0;
  } analysis;

  struct Sorter
  {
    bool enabled = false;
    double pinholeRadius = 0.2; ///< fraction of the order spacing
    int orderMin = -6;
    int orderMax = 6;
    bool normalizeByOrderPower = true;
    double ambiguityThreshold = 0.01;
  } sorter;

  struct Output
  {
    std::string directory = "out";
    bool images = true;
  } output;

  /// Checks cross-field constraints; throws ConfigError.
  void validate() const;

  GridSpec gridSpec() const;
  double wavelength() const;
  BeamSpec beamSpec(int charge) const;
  ForkedGratingSpec gratingSpec() const;
  SpiralZonePlateSpec zonePlateSpec(int charge) const;
  PropagationPlan propagationPlan() const;
  /// Distance from the zone plate to its observation plane.
  double zonePlateDistance() const;
  OrderAnalysisSettings orderSettings() const;
  SorterConfig sorterConfig() const;
};

/// Parses INI text. Unknown sections or keys, missing required keys and
/// malformed values throw ConfigError naming the offending key.
ScenarioConfig parseScenarioConfig(const std::string& text);
ScenarioConfig loadScenarioConfig(const std::string& path);

/// INI text with every field written out, defaults included.
std::string echoScenarioConfig(const ScenarioConfig& config);

} // namespace vortexsim

#endif
