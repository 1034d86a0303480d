#pragma once

#include <cstddef>
#include <span>

#include "rdspec/aligned.hpp"
#include "rdspec/grid.hpp"

struct fftw_plan_s;

namespace rdspec {

/// Forward/inverse transform pair bound to one grid shape.
///
/// Convention: the forward transform is unnormalized, the inverse divides by
/// the total point count. Spectral fields always hold the full (not
/// half-spectrum) array in the grid's storage order.
///
/// Holds scratch buffers, so one instance must not be used from two threads
/// at once. Construction and destruction are thread-safe.
class SpectralTransform {
 public:
  explicit SpectralTransform(const GridSpec& grid);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  void forward(std::span<const double> physical, std::span<Complex> spectral);

  /// Inverse transform keeping only the real part. Implemented on the
  /// Hermitian part of the input, which yields exactly real(ifft(U)).
  void inverse_real(std::span<const Complex> spectral, std::span<double> physical);

  std::size_t size() const { return nx_ * ny_; }
  std::size_t forward_count() const { return forward_count_; }
  std::size_t inverse_count() const { return inverse_count_; }

 private:
  std::size_t nx_;
  std::size_t ny_;
  std::size_t half_nx_;
  RealField real_scratch_;
  ComplexField half_scratch_;
  fftw_plan_s* r2c_ = nullptr;
  fftw_plan_s* c2r_ = nullptr;
  std::size_t forward_count_ = 0;
  std::size_t inverse_count_ = 0;
};

ComplexField forward(const GridSpec& grid, std::span<const double> physical);
RealField inverse_real(const GridSpec& grid, std::span<const Complex> spectral);

/// Elementwise multiplication by -d * omega_sq.
ComplexField apply_laplacian_symbol(const GridSpec& grid, std::span<const Complex> spectral,
                                    double diffusivity);

/// In-place unnormalized complex DFT of an ny-by-nx array (x fastest) of any
/// size. sign = -1 forward, +1 backward (no 1/N factor).
void complex_dft(std::span<Complex> data, std::size_t nx, std::size_t ny, int sign);

}  // namespace rdspec
