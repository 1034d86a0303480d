// Built with -mavx2 (and no FMA); only entered after a runtime CPU check.

#include "rdspec/simd/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace rdspec::simd {

namespace {

constexpr double kMaxFinite = std::numeric_limits<double>::max();

inline __m256d abs_pd(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

// {w[k], w[k], w[k+1], w[k+1]} for two interleaved complex values.
inline __m256d duplicate_pair(const double* w) {
  const __m128d pair = _mm_loadu_pd(w);
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(pair), 0x50);
}

void scale_modes(Complex* out, const double* w, const Complex* x, std::size_t n) {
  auto* o = reinterpret_cast<double*>(out);
  const auto* in = reinterpret_cast<const double*>(x);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d c = duplicate_pair(w + k);
    _mm256_storeu_pd(o + 2 * k, _mm256_mul_pd(c, _mm256_loadu_pd(in + 2 * k)));
  }
  for (; k < n; ++k) {
    const double c = w[k];
    o[2 * k] = c * in[2 * k];
    o[2 * k + 1] = c * in[2 * k + 1];
  }
}

void combine_modes(Complex* out, const WeightedTerm* terms, std::size_t nterms, std::size_t n) {
  auto* o = reinterpret_cast<double*>(out);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t t = 0; t < nterms; ++t) {
      const WeightedTerm& term = terms[t];
      const __m256d s = _mm256_set1_pd(term.scale);
      const __m256d c = term.weight ? _mm256_mul_pd(s, duplicate_pair(term.weight + k)) : s;
      const auto* y = reinterpret_cast<const double*>(term.values);
      const __m256d prod = _mm256_mul_pd(c, _mm256_loadu_pd(y + 2 * k));
      acc = (t == 0) ? prod : _mm256_add_pd(acc, prod);
    }
    _mm256_storeu_pd(o + 2 * k, acc);
  }
  for (; k < n; ++k) {
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

// Lane-wise running max followed by a horizontal reduction. max is exact, so
// the reduction order does not change the result.
inline double horizontal_max(__m256d m) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = lanes[0];
  for (int i = 1; i < 4; ++i) r = (lanes[i] > r) ? lanes[i] : r;
  return r;
}

inline bool all_lanes(__m256d mask) {
  return _mm256_movemask_pd(mask) == 0xF;
}

double max_abs(const double* x, std::size_t n) {
  const __m256d limit = _mm256_set1_pd(kMaxFinite);
  __m256d m = _mm256_setzero_pd();
  __m256d ok = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d a = abs_pd(_mm256_loadu_pd(x + k));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(a, limit, _CMP_LE_OQ));
    m = _mm256_max_pd(a, m);
  }
  bool finite = all_lanes(ok);
  double r = horizontal_max(m);
  for (; k < n; ++k) {
    const double a = std::fabs(x[k]);
    finite = finite && (a <= kMaxFinite);
    r = (a > r) ? a : r;
  }
  return finite ? r : std::numeric_limits<double>::infinity();
}

double max_scaled_error(const double* diff, const double* ref, double rtol, double floor,
                        std::size_t n) {
  const __m256d limit = _mm256_set1_pd(kMaxFinite);
  const __m256d vtol = _mm256_set1_pd(rtol);
  const __m256d vfloor = _mm256_set1_pd(floor);
  __m256d m = _mm256_setzero_pd();
  __m256d ok = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = abs_pd(_mm256_loadu_pd(diff + k));
    const __m256d r = abs_pd(_mm256_loadu_pd(ref + k));
    const __m256d e = _mm256_div_pd(d, _mm256_mul_pd(vtol, _mm256_add_pd(r, vfloor)));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(e, limit, _CMP_LE_OQ));
    m = _mm256_max_pd(e, m);
  }
  bool finite = all_lanes(ok);
  double result = horizontal_max(m);
  for (; k < n; ++k) {
    const double e = std::fabs(diff[k]) / (rtol * (std::fabs(ref[k]) + floor));
    finite = finite && (e <= kMaxFinite);
    result = (e > result) ? e : result;
  }
  return finite ? result : std::numeric_limits<double>::infinity();
}

void fisher(const double* u, double* ru, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d x = _mm256_loadu_pd(u + k);
    _mm256_storeu_pd(ru + k, _mm256_mul_pd(x, _mm256_sub_pd(one, x)));
  }
  for (; k < n; ++k) ru[k] = u[k] * (1.0 - u[k]);
}

void epidemic(const double* u, const double* v, double lambda, double* ru, double* rv,
              std::size_t n) {
  const __m256d lam = _mm256_set1_pd(lambda);
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d x = _mm256_loadu_pd(u + k);
    const __m256d y = _mm256_loadu_pd(v + k);
    _mm256_storeu_pd(ru + k, _mm256_mul_pd(x, _mm256_sub_pd(y, lam)));
    _mm256_storeu_pd(rv + k, _mm256_xor_pd(_mm256_mul_pd(x, y), sign));
  }
  for (; k < n; ++k) {
    const double uv = u[k] * v[k];
    ru[k] = u[k] * (v[k] - lambda);
    rv[k] = -uv;
  }
}

void gray_scott(const double* u, const double* v, double A, double B, double* ru, double* rv,
                std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d va = _mm256_set1_pd(A);
  const __m256d vb = _mm256_set1_pd(B);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d x = _mm256_loadu_pd(u + k);
    const __m256d y = _mm256_loadu_pd(v + k);
    const __m256d t1 = _mm256_mul_pd(_mm256_mul_pd(x, y), y);
    _mm256_storeu_pd(ru + k, _mm256_sub_pd(_mm256_mul_pd(va, _mm256_sub_pd(one, x)), t1));
    _mm256_storeu_pd(rv + k, _mm256_sub_pd(t1, _mm256_mul_pd(vb, y)));
  }
  for (; k < n; ++k) {
    const double t1 = (u[k] * v[k]) * v[k];
    ru[k] = A * (1.0 - u[k]) - t1;
    rv[k] = t1 - B * v[k];
  }
}

void autocatalysis(const double* u, const double* v, unsigned m, double* ru, double* rv,
                   std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    // max_pd(a, b) returns b unless a > b, matching the scalar (u > 0 ? u : 0).
    __m256d base = _mm256_max_pd(_mm256_loadu_pd(u + k), zero);
    __m256d acc = one;
    for (unsigned e = m; e != 0; e >>= 1) {
      if (e & 1u) acc = _mm256_mul_pd(acc, base);
      base = _mm256_mul_pd(base, base);
    }
    const __m256d r = _mm256_mul_pd(_mm256_loadu_pd(v + k), acc);
    _mm256_storeu_pd(ru + k, r);
    _mm256_storeu_pd(rv + k, _mm256_xor_pd(r, sign));
  }
  for (; k < n; ++k) {
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
  const __m256d va0 = _mm256_set1_pd(a0);
  const __m256d va1 = _mm256_set1_pd(a1);
  const __m256d vd = _mm256_set1_pd(delta);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d x = _mm256_loadu_pd(u + k);
    const __m256d y = _mm256_loadu_pd(v + k);
    const __m256d x3 = _mm256_mul_pd(_mm256_mul_pd(x, x), x);
    _mm256_storeu_pd(ru + k, _mm256_sub_pd(_mm256_sub_pd(x, x3), y));
    const __m256d inner = _mm256_sub_pd(_mm256_sub_pd(x, _mm256_mul_pd(va1, y)), va0);
    _mm256_storeu_pd(rv + k, _mm256_mul_pd(vd, inner));
  }
  for (; k < n; ++k) {
    const double u3 = (u[k] * u[k]) * u[k];
    ru[k] = (u[k] - u3) - v[k];
    rv[k] = delta * ((u[k] - a1 * v[k]) - a0);
  }
}

}  // namespace

const KernelTable* avx2_kernels_unchecked() {
  static const KernelTable table{Backend::avx2,   scale_modes, combine_modes, max_abs,
                                 max_scaled_error, fisher,      epidemic,      gray_scott,
                                 autocatalysis,    labyrinthine};
  return &table;
}

}  // namespace rdspec::simd

#else

namespace rdspec::simd {
const KernelTable* avx2_kernels_unchecked() { return nullptr; }
}  // namespace rdspec::simd

#endif
