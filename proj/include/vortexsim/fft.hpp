#ifndef VORTEXSIM_FFT_HPP
#define VORTEXSIM_FFT_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace vortexsim
{

enum class FftDirection
{
  Forward,  ///< exp(-2 pi i k n / N), unnormalized
  Backward, ///< exp(+2 pi i k n / N), unnormalized
};

/// In-place 2-D DFT of a row-major ny x nx array. Wraps FFTW with
/// FFTW_ESTIMATE plans so results do not depend on timing.
void fft2(std::span<std::complex<double>> data, std::size_t nx, std::size_t ny,
          FftDirection direction);

/// DFT of an array whose origin sits at index (nx/2, ny/2), returning the
/// spectrum with zero frequency at (nx/2, ny/2) (shift, transform, shift back).
std::vector<std::complex<double>> centeredFft2(std::span<const std::complex<double>> data,
                                               std::size_t nx, std::size_t ny,
                                               FftDirection direction);

/// Signed frequency index of DFT bin k for length n: k for k < ceil(n/2),
/// k - n otherwise.
inline long signedFrequencyIndex(std::size_t k, std::size_t n)
{
  return k < (n + 1) / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

} // namespace vortexsim

#endif
