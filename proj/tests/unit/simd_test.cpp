#include <doctest.h>

#include <bit>
#include <cstring>
#include <limits>

#include "helpers.hpp"
#include "rdspec/simd/kernels.hpp"

using namespace rdspec;
using rdspec::simd::Backend;

namespace {

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool same_bits(const RealField& a, const RealField& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_bits(a[i], b[i])) return false;
  }
  return true;
}

bool same_bits(const ComplexField& a, const ComplexField& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(Complex)) == 0;
}

ComplexField random_modes(std::size_t n, std::uint64_t seed) {
  const auto re = testing::random_field(n, seed);
  const auto im = testing::random_field(n, seed + 1000);
  ComplexField z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = {re[i], im[i]};
  return z;
}

// Lengths that exercise both the vector body and the scalar tail.
constexpr std::size_t kLengths[] = {1, 3, 4, 7, 64, 1001};

}  // namespace

TEST_CASE("scalar backend is always available") {
  CHECK(simd::backend_available(Backend::scalar));
  CHECK(simd::scalar_kernels().backend == Backend::scalar);
  CHECK(simd::backend_name(Backend::scalar) == "scalar");
  CHECK(simd::backend_name(Backend::avx2) == "avx2");
}

TEST_CASE("set_backend round trip") {
  const Backend before = simd::active_backend();
  simd::set_backend(Backend::scalar);
  CHECK(simd::active_backend() == Backend::scalar);
  CHECK(&simd::active() == &simd::scalar_kernels());
  if (simd::backend_available(Backend::avx2)) {
    simd::set_backend(Backend::avx2);
    CHECK(simd::active_backend() == Backend::avx2);
  } else {
    CHECK_THROWS_AS(simd::set_backend(Backend::avx2), std::invalid_argument);
  }
  simd::set_backend(before);
}

TEST_CASE("scalar reaction kernels match their formulas") {
  const auto& k = simd::scalar_kernels();
  RealField u{0.0, 1.0, 0.5, -0.25}, v{2.0, 1.0, 0.25, 3.0}, ru(4), rv(4);
  k.fisher(u.data(), ru.data(), 4);
  CHECK(ru[0] == 0.0);
  CHECK(ru[1] == 0.0);
  CHECK(ru[2] == 0.25);
  k.gray_scott(u.data(), v.data(), 0.0, 0.0, ru.data(), rv.data(), 4);
  CHECK(ru[1] == -1.0);
  CHECK(rv[1] == 1.0);
  k.autocatalysis(u.data(), v.data(), 9, ru.data(), rv.data(), 4);
  CHECK(ru[3] == 0.0);
  CHECK(rv[3] == 0.0);
  CHECK(ru[1] == 1.0);
  CHECK(rv[1] == -1.0);
  k.epidemic(u.data(), v.data(), 1.0, ru.data(), rv.data(), 4);
  CHECK(ru[1] == 0.0);
  CHECK(rv[1] == -1.0);
}

TEST_CASE("max_abs and max_scaled_error flag non-finite values") {
  const auto& k = simd::active();
  RealField a{1.0, -3.0, 2.0, 0.5, 0.25};
  CHECK(k.max_abs(a.data(), a.size()) == 3.0);
  for (std::size_t pos = 0; pos < a.size(); ++pos) {
    RealField b = a;
    b[pos] = std::numeric_limits<double>::quiet_NaN();
    CHECK(k.max_abs(b.data(), b.size()) == std::numeric_limits<double>::infinity());
    CHECK(k.max_scaled_error(b.data(), a.data(), 1e-4, 1e-8, b.size()) ==
          std::numeric_limits<double>::infinity());
  }
  RealField ref{1.0, 1.0, 1.0, 1.0, 1.0};
  RealField diff{1e-5, 0.0, -2e-4, 0.0, 0.0};
  CHECK(k.max_scaled_error(diff.data(), ref.data(), 1e-4, 0.0, 5) == doctest::Approx(2.0));
}

TEST_CASE("AVX2 kernels are bitwise identical to the scalar reference") {
  const auto* vec = simd::avx2_kernels();
  if (!vec) {
    MESSAGE("AVX2 unavailable on this machine; equivalence not exercised");
    return;
  }
  const auto& ref = simd::scalar_kernels();
  for (std::size_t n : kLengths) {
    const auto u = testing::random_field(n, 100 + n, -1.5, 1.5);
    const auto v = testing::random_field(n, 200 + n, -0.5, 3.0);
    RealField r1(n), r2(n), s1(n), s2(n);

    ref.fisher(u.data(), r1.data(), n);
    vec->fisher(u.data(), r2.data(), n);
    CHECK(same_bits(r1, r2));

    ref.epidemic(u.data(), v.data(), 0.7, r1.data(), s1.data(), n);
    vec->epidemic(u.data(), v.data(), 0.7, r2.data(), s2.data(), n);
    CHECK(same_bits(r1, r2));
    CHECK(same_bits(s1, s2));

    ref.gray_scott(u.data(), v.data(), 0.09, 0.0862, r1.data(), s1.data(), n);
    vec->gray_scott(u.data(), v.data(), 0.09, 0.0862, r2.data(), s2.data(), n);
    CHECK(same_bits(r1, r2));
    CHECK(same_bits(s1, s2));

    for (unsigned m : {1u, 2u, 9u, 11u, 16u}) {
      ref.autocatalysis(u.data(), v.data(), m, r1.data(), s1.data(), n);
      vec->autocatalysis(u.data(), v.data(), m, r2.data(), s2.data(), n);
      CHECK(same_bits(r1, r2));
      CHECK(same_bits(s1, s2));
    }

    ref.labyrinthine(u.data(), v.data(), -0.1, 2.0, 4.0, r1.data(), s1.data(), n);
    vec->labyrinthine(u.data(), v.data(), -0.1, 2.0, 4.0, r2.data(), s2.data(), n);
    CHECK(same_bits(r1, r2));
    CHECK(same_bits(s1, s2));

    CHECK(same_bits(ref.max_abs(u.data(), n), vec->max_abs(u.data(), n)));
    CHECK(same_bits(ref.max_scaled_error(u.data(), v.data(), 1e-4, 1e-8, n),
                    vec->max_scaled_error(u.data(), v.data(), 1e-4, 1e-8, n)));

    const auto x = random_modes(n, 300 + n);
    const auto y = random_modes(n, 400 + n);
    const auto z = random_modes(n, 500 + n);
    const auto w1 = testing::random_field(n, 600 + n, 0.0, 1.0);
    const auto w2 = testing::random_field(n, 700 + n, 0.0, 1.0);
    ComplexField c1(n), c2(n);
    ref.scale_modes(c1.data(), w1.data(), x.data(), n);
    vec->scale_modes(c2.data(), w1.data(), x.data(), n);
    CHECK(same_bits(c1, c2));

    const simd::WeightedTerm terms[] = {
        {1.0, w1.data(), x.data()}, {0.35, nullptr, y.data()}, {-2.0, w2.data(), z.data()}};
    ref.combine_modes(c1.data(), terms, 3, n);
    vec->combine_modes(c2.data(), terms, 3, n);
    CHECK(same_bits(c1, c2));

    // Aliased output, as the steppers use it.
    ComplexField a1 = x, a2 = x;
    const simd::WeightedTerm t1[] = {{1.0, w1.data(), a1.data()}, {0.5, w2.data(), y.data()}};
    const simd::WeightedTerm t2[] = {{1.0, w1.data(), a2.data()}, {0.5, w2.data(), y.data()}};
    ref.combine_modes(a1.data(), t1, 2, n);
    vec->combine_modes(a2.data(), t2, 2, n);
    CHECK(same_bits(a1, a2));
  }
}

TEST_CASE("combine_modes accumulates in term order") {
  const auto& k = simd::scalar_kernels();
  ComplexField x{{1.0, 2.0}}, y{{3.0, -1.0}}, out(1);
  RealField w{0.5};
  const simd::WeightedTerm terms[] = {{2.0, w.data(), x.data()}, {1.0, nullptr, y.data()}};
  k.combine_modes(out.data(), terms, 2, 1);
  CHECK(out[0] == Complex(4.0, 1.0));
}
