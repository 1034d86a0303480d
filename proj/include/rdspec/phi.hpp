#pragma once

#include <span>

#include "rdspec/aligned.hpp"

namespace rdspec {

// phi_0(z) = (e^z - 1)/z, phi_1(z) = (e^z - 1 - z)/z^2, phi_2(z) = (e^z - 1 - z - z^2/2)/z^3.
//
// For |z| <= kPhiContourThreshold the direct formulas lose accuracy to
// cancellation; there the value is the mean of the direct formula over
// kPhiContourPoints equispaced points on the unit circle centred at z.

inline constexpr double kPhiContourThreshold = 0.5;
inline constexpr int kPhiContourPoints = 32;

/// k must be 0, 1 or 2; other values throw std::invalid_argument.
double phi(int k, double z);
Complex phi(int k, Complex z);

void phi(int k, std::span<const double> z, std::span<double> out);

}  // namespace rdspec
