#include "rdspec/phi.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rdspec {

namespace {

template <class T>
T phi_direct(int k, T z) {
  const T ez = std::exp(z);
  switch (k) {
    case 0:
      return (ez - T(1.0)) / z;
    case 1:
      return (ez - T(1.0) - z) / (z * z);
    default:
      return (ez - T(1.0) - z - z * z * T(0.5)) / (z * z * z);
  }
}

void check_order(int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("phi: order must be 0, 1 or 2");
}

const Complex* unit_roots() {
  static const auto roots = [] {
    static Complex r[kPhiContourPoints];
    for (int j = 0; j < kPhiContourPoints; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / kPhiContourPoints;
      r[j] = Complex(std::cos(theta), std::sin(theta));
    }
    return r;
  }();
  return roots;
}

}  // namespace

double phi(int k, double z) {
  check_order(k);
  if (std::fabs(z) > kPhiContourThreshold) return phi_direct(k, z);
  // Real argument: points j and M - j are conjugates, so only the upper half
  // of the circle is evaluated.
  const Complex* r = unit_roots();
  constexpr int half = kPhiContourPoints / 2;
  double sum = phi_direct(k, Complex(z) + r[0]).real() + phi_direct(k, Complex(z) + r[half]).real();
  for (int j = 1; j < half; ++j) sum += 2.0 * phi_direct(k, Complex(z) + r[j]).real();
  return sum / kPhiContourPoints;
}

Complex phi(int k, Complex z) {
  check_order(k);
  if (std::abs(z) > kPhiContourThreshold) return phi_direct(k, z);
  const Complex* r = unit_roots();
  Complex sum(0.0, 0.0);
  for (int j = 0; j < kPhiContourPoints; ++j) sum += phi_direct(k, z + r[j]);
  return sum / static_cast<double>(kPhiContourPoints);
}

void phi(int k, std::span<const double> z, std::span<double> out) {
  if (z.size() != out.size()) throw std::invalid_argument("phi: size mismatch");
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = phi(k, z[i]);
}

}  // namespace rdspec
