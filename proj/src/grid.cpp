#include "rdspec/grid.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace rdspec {

namespace {

void check_axis(std::size_t n, double half_length) {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("grid: n must be even and >= 4, got " + std::to_string(n));
  }
  if (!(half_length > 0.0)) {
    throw std::invalid_argument("grid: half-length must be positive");
  }
}

RealField node_coordinates(std::size_t n, double half_length) {
  RealField x(n);
  const double h = 2.0 * half_length / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = -half_length + static_cast<double>(i) * h;
  }
  return x;
}

}  // namespace

RealField wavenumber_vector(std::size_t n, double half_length) {
  RealField k(n);
  const double scale = std::numbers::pi / half_length;
  const auto half = static_cast<long>(n / 2);
  for (std::size_t i = 0; i < n; ++i) {
    long m = static_cast<long>(i);
    if (m > half) m -= static_cast<long>(n);
    k[i] = scale * static_cast<double>(m);
  }
  return k;
}

GridSpec make_grid(std::array<std::size_t, 2> n, std::array<double, 2> half_length, int dims) {
  if (dims != 1 && dims != 2) {
    throw std::invalid_argument("grid: dims must be 1 or 2");
  }
  GridSpec g;
  g.dims = dims;
  check_axis(n[0], half_length[0]);
  g.n[0] = n[0];
  g.half_length[0] = half_length[0];
  if (dims == 2) {
    check_axis(n[1], half_length[1]);
    g.n[1] = n[1];
    g.half_length[1] = half_length[1];
  } else {
    g.n[1] = 1;
    g.half_length[1] = 0.0;
  }

  for (int a = 0; a < dims; ++a) {
    g.coords[a] = node_coordinates(g.n[a], g.half_length[a]);
    g.wavenumbers[a] = wavenumber_vector(g.n[a], g.half_length[a]);
  }

  g.omega_sq.resize(g.size());
  if (dims == 1) {
    for (std::size_t i = 0; i < g.n[0]; ++i) {
      g.omega_sq[i] = g.wavenumbers[0][i] * g.wavenumbers[0][i];
    }
  } else {
    const auto& wx = g.wavenumbers[0];
    const auto& wy = g.wavenumbers[1];
    for (std::size_t j = 0; j < g.n[1]; ++j) {
      for (std::size_t i = 0; i < g.n[0]; ++i) {
        g.omega_sq[j * g.n[0] + i] = wx[i] * wx[i] + wy[j] * wy[j];
      }
    }
  }
  return g;
}

GridSpec make_grid(std::size_t n, double half_length, int dims) {
  return make_grid({n, n}, {half_length, half_length}, dims);
}

}  // namespace rdspec
