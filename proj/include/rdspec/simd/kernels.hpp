#pragma once

#include <cstddef>
#include <string_view>

#include "rdspec/aligned.hpp"

// Data-parallel inner loops shared by the steppers and the model registry.
//
// Every kernel has a scalar reference implementation and an AVX2 variant.
// Both perform the same floating-point operations in the same order per
// element (no FMA contraction), so their results are bitwise identical.
namespace rdspec::simd {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend b);

/// One term of a per-mode linear combination: scale * weight[k] * values[k].
/// A null weight means a weight of one.
struct WeightedTerm {
  double scale = 1.0;
  const double* weight = nullptr;
  const Complex* values = nullptr;
};

struct KernelTable {
  Backend backend;

  // out[k] = w[k] * x[k]; out may alias x.
  void (*scale_modes)(Complex* out, const double* w, const Complex* x, std::size_t n);

  // out[k] = sum_t (scale_t * weight_t[k]) * values_t[k], accumulated in term order.
  // out may alias any values_t.
  void (*combine_modes)(Complex* out, const WeightedTerm* terms, std::size_t nterms,
                        std::size_t n);

  // max |x[k]|, or +inf when any entry is not finite.
  double (*max_abs)(const double* x, std::size_t n);

  // max |diff[k]| / (rtol * (|ref[k]| + floor)), or +inf when any entry is not finite.
  double (*max_scaled_error)(const double* diff, const double* ref, double rtol, double floor,
                             std::size_t n);

  // u(1 - u)
  void (*fisher)(const double* u, double* ru, std::size_t n);
  // u(v - lambda), -uv
  void (*epidemic)(const double* u, const double* v, double lambda, double* ru, double* rv,
                   std::size_t n);
  // -uv^2 + A(1 - u), uv^2 - Bv
  void (*gray_scott)(const double* u, const double* v, double A, double B, double* ru,
                     double* rv, std::size_t n);
  // v max(u,0)^m, -v max(u,0)^m
  void (*autocatalysis)(const double* u, const double* v, unsigned m, double* ru, double* rv,
                        std::size_t n);
  // u - u^3 - v, delta(u - a1 v - a0)
  void (*labyrinthine)(const double* u, const double* v, double a0, double a1, double delta,
                       double* ru, double* rv, std::size_t n);
};

const KernelTable& scalar_kernels();

/// Null when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

bool backend_available(Backend b);

/// Kernels used by the library. Defaults to the widest backend the CPU
/// supports; the RDSPEC_SIMD environment variable ("scalar" or "avx2")
/// overrides the initial choice.
const KernelTable& active();

/// Throws std::invalid_argument when the backend is unavailable.
void set_backend(Backend b);
Backend active_backend();

}  // namespace rdspec::simd
