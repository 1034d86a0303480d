#include "rdspec/transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <string>

namespace rdspec {

namespace {

// FFTW planning and plan destruction are not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_size(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch, expected " +
                                std::to_string(expected) + " values, got " +
                                std::to_string(got));
  }
}

}  // namespace

SpectralTransform::SpectralTransform(const GridSpec& grid)
    : nx_(grid.nx()),
      ny_(grid.ny()),
      half_nx_(grid.nx() / 2 + 1),
      real_scratch_(grid.size()),
      half_scratch_(grid.ny() * (grid.nx() / 2 + 1)) {
  auto* real = real_scratch_.data();
  auto* half = reinterpret_cast<fftw_complex*>(half_scratch_.data());
  std::lock_guard lock(planner_mutex());
  if (grid.dims == 1) {
    r2c_ = fftw_plan_dft_r2c_1d(static_cast<int>(nx_), real, half, FFTW_ESTIMATE);
    c2r_ = fftw_plan_dft_c2r_1d(static_cast<int>(nx_), half, real, FFTW_ESTIMATE);
  } else {
    r2c_ = fftw_plan_dft_r2c_2d(static_cast<int>(ny_), static_cast<int>(nx_), real, half,
                                FFTW_ESTIMATE);
    c2r_ = fftw_plan_dft_c2r_2d(static_cast<int>(ny_), static_cast<int>(nx_), half, real,
                                FFTW_ESTIMATE);
  }
  if (!r2c_ || !c2r_) {
    throw std::runtime_error("fftw: plan creation failed");
  }
}

SpectralTransform::~SpectralTransform() {
  std::lock_guard lock(planner_mutex());
  if (r2c_) fftw_destroy_plan(r2c_);
  if (c2r_) fftw_destroy_plan(c2r_);
}

void SpectralTransform::forward(std::span<const double> physical, std::span<Complex> spectral) {
  check_size(size(), physical.size(), "forward");
  check_size(size(), spectral.size(), "forward");
  std::copy(physical.begin(), physical.end(), real_scratch_.begin());
  fftw_execute(r2c_);

  // Expand the half spectrum; the upper half is the conjugate mirror.
  for (std::size_t j = 0; j < ny_; ++j) {
    const std::size_t jm = (ny_ - j) % ny_;
    Complex* row = spectral.data() + j * nx_;
    const Complex* half_row = half_scratch_.data() + j * half_nx_;
    const Complex* mirror_row = half_scratch_.data() + jm * half_nx_;
    for (std::size_t i = 0; i < half_nx_; ++i) row[i] = half_row[i];
    for (std::size_t i = half_nx_; i < nx_; ++i) row[i] = std::conj(mirror_row[nx_ - i]);
  }
  ++forward_count_;
}

void SpectralTransform::inverse_real(std::span<const Complex> spectral,
                                     std::span<double> physical) {
  check_size(size(), spectral.size(), "inverse_real");
  check_size(size(), physical.size(), "inverse_real");
  for (std::size_t j = 0; j < ny_; ++j) {
    const std::size_t jm = (ny_ - j) % ny_;
    const Complex* row = spectral.data() + j * nx_;
    const Complex* mirror_row = spectral.data() + jm * nx_;
    Complex* half_row = half_scratch_.data() + j * half_nx_;
    for (std::size_t i = 0; i < half_nx_; ++i) {
      const Complex mirrored = std::conj(mirror_row[(nx_ - i) % nx_]);
      half_row[i] = (row[i] + mirrored) * 0.5;
    }
  }
  fftw_execute(c2r_);
  const auto total = static_cast<double>(size());
  for (std::size_t k = 0; k < size(); ++k) physical[k] = real_scratch_[k] / total;
  ++inverse_count_;
}

ComplexField forward(const GridSpec& grid, std::span<const double> physical) {
  SpectralTransform tf(grid);
  ComplexField out(grid.size());
  tf.forward(physical, out);
  return out;
}

RealField inverse_real(const GridSpec& grid, std::span<const Complex> spectral) {
  SpectralTransform tf(grid);
  RealField out(grid.size());
  tf.inverse_real(spectral, out);
  return out;
}

ComplexField apply_laplacian_symbol(const GridSpec& grid, std::span<const Complex> spectral,
                                    double diffusivity) {
  check_size(grid.size(), spectral.size(), "apply_laplacian_symbol");
  if (diffusivity < 0.0) {
    throw std::invalid_argument("apply_laplacian_symbol: diffusivity must be >= 0");
  }
  ComplexField out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out[k] = (-diffusivity * grid.omega_sq[k]) * spectral[k];
  }
  return out;
}

void complex_dft(std::span<Complex> data, std::size_t nx, std::size_t ny, int sign) {
  check_size(nx * ny, data.size(), "complex_dft");
  if (data.empty()) return;
  ComplexField buf(data.begin(), data.end());
  auto* ptr = reinterpret_cast<fftw_complex*>(buf.data());
  const int dir = sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = (ny == 1) ? fftw_plan_dft_1d(static_cast<int>(nx), ptr, ptr, dir, FFTW_ESTIMATE)
                     : fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), ptr, ptr,
                                        dir, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::copy(buf.begin(), buf.end(), data.begin());
}

}  // namespace rdspec
