#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rdspec/aligned.hpp"
#include "rdspec/grid.hpp"

namespace rdspec {

/// Zero-padded Fourier interpolation of a periodic 1D field (any length n)
/// onto new_n >= n points. The low block keeps indices 0 .. n/2 (so the
/// Nyquist mode of an even n stays in it), zeros are inserted after it.
/// Throws std::invalid_argument when new_n < n.
RealField fourier_upsample_1d(std::span<const double> field, std::size_t new_n);

/// 2D analogue for an ny-by-nx field stored with x fastest.
RealField fourier_upsample_2d(std::span<const double> field, std::size_t nx, std::size_t ny,
                              std::size_t new_nx, std::size_t new_ny);

enum class FrontDirection { rightmost, leftmost };

/// Position of the outermost threshold crossing, by linear interpolation
/// between the bracketing nodes. Empty when the field never crosses.
std::optional<double> front_position(std::span<const double> u, const GridSpec& grid,
                                     double threshold = 1e-4,
                                     FrontDirection direction = FrontDirection::rightmost);

struct FrontTrace {
  double threshold = 1e-4;
  std::vector<double> times;
  std::vector<double> positions;

  void record(double t, std::optional<double> x) {
    if (x) {
      times.push_back(t);
      positions.push_back(*x);
    }
  }
};

/// Least-squares slope of X(t) over samples with t0 <= t <= t1.
/// Throws std::invalid_argument with fewer than 10 samples in the window.
double front_speed(const FrontTrace& trace, double t0, double t1);

/// Window defaults to the final half of the recorded times.
double front_speed(const FrontTrace& trace);

/// Strict local maxima above floor with periodic neighbours. In 2D a maximum
/// must beat its four axis neighbours. Throws std::invalid_argument for floor <= 0.
std::size_t pulse_count(std::span<const double> v, double floor);
std::size_t pulse_count(std::span<const double> v, const GridSpec& grid, double floor);

/// max |a - b| over all species and points. Throws std::invalid_argument on shape mismatch.
double max_abs_error(std::span<const double> a, std::span<const double> b);
double max_abs_error(const std::vector<RealField>& a, const std::vector<RealField>& b);

/// Least-squares slope of log(error) against log(dt).
double convergence_slope(std::span<const double> dts, std::span<const double> errors);

}  // namespace rdspec
