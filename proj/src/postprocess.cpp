#include "rdspec/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rdspec/transform.hpp"

namespace rdspec {

namespace {

// Index of the first entry of the high block: (n - n mod 2)/2 + 1 entries stay low.
std::size_t low_block(std::size_t n) { return (n - n % 2) / 2 + 1; }

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit: abscissae are all equal");
  return sxy / sxx;
}

}  // namespace

RealField fourier_upsample_1d(std::span<const double> field, std::size_t new_n) {
  return fourier_upsample_2d(field, field.size(), 1, new_n, 1);
}

RealField fourier_upsample_2d(std::span<const double> field, std::size_t nx, std::size_t ny,
                              std::size_t new_nx, std::size_t new_ny) {
  if (field.size() != nx * ny || nx == 0 || ny == 0) {
    throw std::invalid_argument("fourier_upsample: field size does not match its shape");
  }
  if (new_nx < nx || new_ny < ny) {
    throw std::invalid_argument("fourier_upsample: new sizes must not be smaller");
  }
  ComplexField spectrum(field.begin(), field.end());
  complex_dft(spectrum, nx, ny, -1);

  const double scale =
      (static_cast<double>(new_nx) / static_cast<double>(nx)) *
      (static_cast<double>(new_ny) / static_cast<double>(ny));
  const std::size_t hx = low_block(nx);
  const std::size_t hy = low_block(ny);
  ComplexField padded(new_nx * new_ny, Complex(0.0, 0.0));
  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t jj = (ny == 1 || j < hy) ? j : j + (new_ny - ny);
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t ii = i < hx ? i : i + (new_nx - nx);
      padded[jj * new_nx + ii] = scale * spectrum[j * nx + i];
    }
  }
  complex_dft(padded, new_nx, new_ny, +1);
  const auto total = static_cast<double>(new_nx * new_ny);
  RealField out(new_nx * new_ny);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = padded[k].real() / total;
  return out;
}

std::optional<double> front_position(std::span<const double> u, const GridSpec& grid,
                                     double threshold, FrontDirection direction) {
  if (grid.dims != 1) throw std::invalid_argument("front_position: 1D grids only");
  if (u.size() != grid.size()) throw std::invalid_argument("front_position: shape mismatch");
  const auto& x = grid.coords[0];
  const double h = grid.spacing();
  const std::size_t n = u.size();
  if (direction == FrontDirection::rightmost) {
    for (std::size_t i = n - 1; i-- > 0;) {
      if (u[i] >= threshold && u[i + 1] < threshold) {
        return x[i] + (threshold - u[i]) / (u[i + 1] - u[i]) * h;
      }
    }
  } else {
    for (std::size_t i = 1; i < n; ++i) {
      if (u[i] >= threshold && u[i - 1] < threshold) {
        return x[i - 1] + (threshold - u[i - 1]) / (u[i] - u[i - 1]) * h;
      }
    }
  }
  return std::nullopt;
}

double front_speed(const FrontTrace& trace, double t0, double t1) {
  std::vector<double> ts;
  std::vector<double> xs;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    if (trace.times[i] >= t0 && trace.times[i] <= t1) {
      ts.push_back(trace.times[i]);
      xs.push_back(trace.positions[i]);
    }
  }
  if (ts.size() < 10) {
    throw std::invalid_argument("front_speed: need at least 10 samples in the fit window");
  }
  return least_squares_slope(ts, xs);
}

double front_speed(const FrontTrace& trace) {
  if (trace.times.empty()) throw std::invalid_argument("front_speed: empty trace");
  const double t_end = trace.times.back();
  const double t_start = trace.times.front();
  return front_speed(trace, t_start + 0.5 * (t_end - t_start), t_end);
}

std::size_t pulse_count(std::span<const double> v, double floor) {
  if (!(floor > 0.0)) throw std::invalid_argument("pulse_count: floor must be positive");
  const std::size_t n = v.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = v[(i + n - 1) % n];
    const double right = v[(i + 1) % n];
    if (v[i] > floor && v[i] > left && v[i] > right) ++count;
  }
  return count;
}

std::size_t pulse_count(std::span<const double> v, const GridSpec& grid, double floor) {
  if (v.size() != grid.size()) throw std::invalid_argument("pulse_count: shape mismatch");
  if (grid.dims == 1) return pulse_count(v, floor);
  if (!(floor > 0.0)) throw std::invalid_argument("pulse_count: floor must be positive");
  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  std::size_t count = 0;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double c = v[j * nx + i];
      if (!(c > floor)) continue;
      const double l = v[j * nx + (i + nx - 1) % nx];
      const double r = v[j * nx + (i + 1) % nx];
      const double d = v[((j + ny - 1) % ny) * nx + i];
      const double u = v[((j + 1) % ny) * nx + i];
      if (c > l && c > r && c > d && c > u) ++count;
    }
  }
  return count;
}

double max_abs_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_error: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double max_abs_error(const std::vector<RealField>& a, const std::vector<RealField>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_error: species mismatch");
  double m = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) m = std::max(m, max_abs_error(a[s], b[s]));
  return m;
}

double convergence_slope(std::span<const double> dts, std::span<const double> errors) {
  if (dts.size() != errors.size() || dts.size() < 2) {
    throw std::invalid_argument("convergence_slope: need matching series of length >= 2");
  }
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    lx.push_back(std::log(dts[i]));
    ly.push_back(std::log(errors[i]));
  }
  return least_squares_slope(lx, ly);
}

}  // namespace rdspec
