#pragma once

#include <array>
#include <cstddef>

#include "rdspec/aligned.hpp"

namespace rdspec {

/// Periodic uniform grid on [-L, L) per axis.
///
/// 2D fields are stored row-major with x fastest: element (i, j) lives at
/// index j * nx + i, where i runs along x and j along y.
struct GridSpec {
  int dims = 1;
  std::array<std::size_t, 2> n{0, 1};
  std::array<double, 2> half_length{0.0, 0.0};
  std::array<RealField, 2> coords;
  std::array<RealField, 2> wavenumbers;
  RealField omega_sq;

  std::size_t nx() const { return n[0]; }
  std::size_t ny() const { return n[1]; }
  std::size_t size() const { return n[0] * n[1]; }
  double spacing(int axis = 0) const {
    return 2.0 * half_length[axis] / static_cast<double>(n[axis]);
  }
  bool same_shape(const GridSpec& other) const {
    return dims == other.dims && n == other.n;
  }
};

/// Builds a periodic grid with n points and half-length L on every axis.
/// Throws std::invalid_argument for odd n, n < 4, or L <= 0.
GridSpec make_grid(std::size_t n, double half_length, int dims);

/// Per-axis variant; axis 1 is ignored for dims == 1.
GridSpec make_grid(std::array<std::size_t, 2> n, std::array<double, 2> half_length, int dims);

/// (pi/L) * [0, 1, ..., n/2, -n/2+1, ..., -1]
RealField wavenumber_vector(std::size_t n, double half_length);

}  // namespace rdspec
