#ifndef VORTEXSIM_TESTS_HELPERS_HPP
#define VORTEXSIM_TESTS_HELPERS_HPP

#include "vortexsim/beam.hpp"
#include "vortexsim/field.hpp"

#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <string>
#include <numbers>
#include <vector>

namespace testing
{

inline vortexsim::GridSpec grid(std::size_t n = 128, double pitch = 10e-9, double wavelength = 2.5e-12)
{
  return vortexsim::GridSpec{n, n, pitch, wavelength};
}

/// Field built pixel by pixel from f(x, y).
template <class F>
vortexsim::ComplexField fieldFrom(const vortexsim::GridSpec& g, F&& f)
{
  std::vector<vortexsim::Complex> v(g.size());
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i)
      v[g.index(i, j)] = f(g.x(i), g.y(j));
  return vortexsim::ComplexField(g, std::move(v));
}

inline vortexsim::ComplexField vortex(const vortexsim::GridSpec& g, int m, double radius,
                                      vortexsim::BeamProfile profile = vortexsim::BeamProfile::UniformDisk,
                                      vortexsim::Point center = {})
{
  vortexsim::BeamSpec spec;
  spec.charge = m;
  spec.radius = radius;
  spec.profile = profile;
  spec.center = center;
  return vortexsim::makeBeam(g, spec);
}

/// Fresh directory under the system temp path, removed on destruction.
class TempDir
{
public:
  TempDir()
  {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("vortexsim-test-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir()
  {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
  std::filesystem::path path_;
};

/// Plane wave through an 8 px forked grating on a 256 px grid, analyzed in
/// the lens focal plane. Runs in well under a second.
inline std::string tinyConfig(const std::string& outDir, const std::string& extra = "")
{
  return "[scenario]\nname = tiny\n\n"
         "[grid]\nnx = 256\nny = 256\npitch_nm = 10\nvoltage_kv = 200\n\n"
         "[beam]\nsource = plane\ncharges = 0\n\n"
         "[grating]\nenabled = true\nperiod_um = 0.08\nburgers = 1\nradius_um = 0.6\nduty = 0.5\n\n"
         "[propagation]\nmethod = lens-fourier\nfocal_length_m = 1\n\n"
         "[analysis]\norder_min = -3\norder_max = 3\nq_max = 8\n\n"
         "[output]\ndirectory = " +
         outDir + "\nimages = false\n" + extra;
}

} // namespace testing

#endif
