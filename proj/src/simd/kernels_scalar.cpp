#include <cmath>
#include <limits>

#include "rdspec/simd/kernels.hpp"

namespace rdspec::simd {

namespace {

void scale_modes(Complex* out, const double* w, const Complex* x, std::size_t n) {
  auto* o = reinterpret_cast<double*>(out);
  const auto* in = reinterpret_cast<const double*>(x);
  for (std::size_t k = 0; k < n; ++k) {
    const double c = w[k];
    o[2 * k] = c * in[2 * k];
    o[2 * k + 1] = c * in[2 * k + 1];
  }
}

void combine_modes(Complex* out, const WeightedTerm* terms, std::size_t nterms, std::size_t n) {
  auto* o = reinterpret_cast<double*>(out);
  for (std::size_t k = 0; k < n; ++k) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t t = 0; t < nterms; ++t) {
      const WeightedTerm& term = terms[t];
      const double c = term.weight ? term.scale * term.weight[k] : term.scale;
      const auto* y = reinterpret_cast<const double*>(term.values);
      if (t == 0) {
        re = c * y[2 * k];
        im = c * y[2 * k + 1];
      } else {
        re = re + c * y[2 * k];
        im = im + c * y[2 * k + 1];
      }
    }
    o[2 * k] = re;
    o[2 * k + 1] = im;
  }
}

constexpr double kMaxFinite = std::numeric_limits<double>::max();

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  bool finite = true;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = std::fabs(x[k]);
    finite = finite && (a <= kMaxFinite);
    m = (a > m) ? a : m;
  }
  return finite ? m : std::numeric_limits<double>::infinity();
}

double max_scaled_error(const double* diff, const double* ref, double rtol, double floor,
                        std::size_t n) {
  double m = 0.0;
  bool finite = true;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = std::fabs(diff[k]) / (rtol * (std::fabs(ref[k]) + floor));
    finite = finite && (e <= kMaxFinite);
    m = (e > m) ? e : m;
  }
  return finite ? m : std::numeric_limits<double>::infinity();
}

void fisher(const double* u, double* ru, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    ru[k] = u[k] * (1.0 - u[k]);
  }
}

void epidemic(const double* u, const double* v, double lambda, double* ru, double* rv,
              std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double uv = u[k] * v[k];
    ru[k] = u[k] * (v[k] - lambda);
    rv[k] = -uv;
  }
}

void gray_scott(const double* u, const double* v, double A, double B, double* ru, double* rv,
                std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double t1 = (u[k] * v[k]) * v[k];
    ru[k] = A * (1.0 - u[k]) - t1;
    rv[k] = t1 - B * v[k];
  }
}

void autocatalysis(const double* u, const double* v, unsigned m, double* ru, double* rv,
                   std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    double base = (u[k] > 0.0) ? u[k] : 0.0;
    double acc = 1.0;
    for (unsigned e = m; e != 0; e >>= 1) {
      if (e & 1u) acc = acc * base;
      base = base * base;
    }
    const double r = v[k] * acc;
    ru[k] = r;
    rv[k] = -r;
  }
}

void labyrinthine(const double* u, const double* v, double a0, double a1, double delta,
                  double* ru, double* rv, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double u3 = (u[k] * u[k]) * u[k];
    ru[k] = (u[k] - u3) - v[k];
    rv[k] = delta * ((u[k] - a1 * v[k]) - a0);
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Backend::scalar, scale_modes,  combine_modes, max_abs,
                                 max_scaled_error, fisher,      epidemic,      gray_scott,
                                 autocatalysis,    labyrinthine};
  return table;
}

}  // namespace rdspec::simd
