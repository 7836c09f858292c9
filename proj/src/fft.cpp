#include "vortexsim/fft.hpp"

#include "vortexsim/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>

namespace vortexsim
{

namespace
{

// The FFTW planner is not reentrant.
std::mutex gPlannerMutex;

struct FftwFree
{
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

using FftwBuffer = std::unique_ptr<fftw_complex, FftwFree>;

FftwBuffer allocate(std::size_t count)
{
  FftwBuffer buffer(fftw_alloc_complex(count));
  if (!buffer)
    throw Error("FFT buffer allocation failed");
  return buffer;
}

void transform(fftw_complex* buffer, std::size_t nx, std::size_t ny, FftDirection direction)
{
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(gPlannerMutex);
    plan = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buffer, buffer,
                            direction == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  if (!plan)
    throw Error("FFTW could not create a plan");
  fftw_execute(plan);
  std::lock_guard lock(gPlannerMutex);
  fftw_destroy_plan(plan);
}

} // namespace

void fft2(std::span<std::complex<double>> data, std::size_t nx, std::size_t ny,
          FftDirection direction)
{
  if (data.size() != nx * ny)
    throw ShapeError("fft2: data size does not match dimensions");
  FftwBuffer buffer = allocate(data.size());
  auto* raw = reinterpret_cast<std::complex<double>*>(buffer.get());
  std::copy(data.begin(), data.end(), raw);
  transform(buffer.get(), nx, ny, direction);
  std::copy(raw, raw + data.size(), data.begin());
}

std::vector<std::complex<double>> centeredFft2(std::span<const std::complex<double>> data,
                                               std::size_t nx, std::size_t ny,
                                               FftDirection direction)
{
  if (data.size() != nx * ny)
    throw ShapeError("centeredFft2: data size does not match dimensions");
  FftwBuffer buffer = allocate(data.size());
  auto* raw = reinterpret_cast<std::complex<double>*>(buffer.get());

  // Move the origin from (nx/2, ny/2) to (0, 0).
  const std::size_t cx = nx / 2;
  const std::size_t cy = ny / 2;
  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t jj = (j + ny - cy) % ny;
    for (std::size_t i = 0; i < nx; ++i)
      raw[jj * nx + (i + nx - cx) % nx] = data[j * nx + i];
  }

  transform(buffer.get(), nx, ny, direction);

  std::vector<std::complex<double>> out(data.size());
  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t jj = (j + cy) % ny;
    for (std::size_t i = 0; i < nx; ++i)
      out[jj * nx + (i + cx) % nx] = raw[j * nx + i];
  }
  return out;
}

} // namespace vortexsim
