#include <doctest.h>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "phi_oracle.hpp"
#include "rdspec/exp_tables.hpp"
#include "rdspec/models.hpp"
#include "rdspec/phi.hpp"

using namespace rdspec;


TEST_CASE("phi at the removable singularity and at 1") {
  CHECK(phi(0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(phi(1, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(phi(2, 0.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(phi(0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
  CHECK_THROWS_AS(phi(3, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(phi(-1, 0.1), std::invalid_argument);
}

TEST_CASE("phi agrees with the series oracle on the negative real axis") {
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double mag = std::pow(10.0, -8.0 + 10.0 * i / 999.0);
    const double z = -mag;
    for (int k = 0; k < 3; ++k) {
      const double err = std::fabs(phi(k, z) - static_cast<double>(testing::phi_oracle(k, z)));
      worst = std::max(worst, err);
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("complex phi matches the real evaluation and the series off-axis") {
  for (double x : {-3.0, -0.4, -1e-6, 0.0, 0.3}) {
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(phi(k, Complex(x, 0.0)) - phi(k, x)) < 1e-14);
    }
  }
  const Complex z(0.2, 0.3);
  Complex s = 0.0, term = 0.5;  // phi_1 series
  for (int j = 0; j < 30; ++j) {
    s += term;
    term *= z / static_cast<double>(j + 3);
  }
  CHECK(std::abs(phi(1, z) - s) < 1e-14);
}

TEST_CASE("vectorised phi") {
  RealField z{-50.0, -1.0, -0.01, 0.0}, out(4);
  phi(2, z, out);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(out[i] == phi(2, z[i]));
}

TEST_CASE("exp tables: zero mode and a single mode") {
  const auto g = make_grid(8, 1.0, 1);
  const double d[] = {1.0};
  const auto t = build_exp_tables(make_symbol(g, d), 0.5);
  const auto& s = t.species[0];
  CHECK(t.dt == 0.5);
  CHECK(s.E[0] == 1.0);
  CHECK(s.phi0[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.phi1[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.phi2[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK_THROWS_AS(build_exp_tables(make_symbol(g, d), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_exp_tables(make_symbol(g, d), -1.0), std::invalid_argument);

  LinearSymbol one{{RealField{-1.0}}};
  const auto u = build_exp_tables(one, 1.0);
  CHECK(u.species[0].E[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("recurrence spot check at L=-4, dt=0.1") {
  LinearSymbol sym{{RealField{-4.0}}};
  const auto t = build_exp_tables(sym, 0.1);
  const double z = -0.4;
  const auto& s = t.species[0];
  CHECK(std::abs(z * s.phi1[0] - (s.phi0[0] - 1.0)) < 1e-14);
  CHECK(std::abs(z * s.phi2[0] - (s.phi1[0] - 0.5)) < 1e-14);
  CHECK(s.phi0[0] == doctest::Approx((std::exp(z) - 1.0) / z).epsilon(1e-14));
}

TEST_CASE("table invariants on every model grid and several steps") {
  for (const auto& name : model_names()) {
    const auto m = make_model(name);
    const auto g = m.make_default_grid();
    const auto sym = make_symbol(g, m.diffusivity);
    for (double dt : {0.01, 0.1, 1.0, 10.0}) {
      const auto t = build_exp_tables(sym, dt);
      REQUIRE(t.species.size() == m.diffusivity.size());
      for (std::size_t sp = 0; sp < t.species.size(); ++sp) {
        const auto& s = t.species[sp];
        const auto& L = sym.per_species[sp];
        CHECK(L[0] == 0.0);
        CHECK(s.E[0] == 1.0);
        double rec = 0.0, half = 0.0;
        bool bounded = true;
        for (std::size_t k = 0; k < L.size(); ++k) {
          const double z = L[k] * dt;
          bounded = bounded && L[k] <= 0.0 && s.E[k] >= 0.0 && s.E[k] <= 1.0;
          rec = std::max(rec, std::fabs(z * s.phi1[k] - (s.phi0[k] - 1.0)));
          rec = std::max(rec, std::fabs(z * s.phi2[k] - (s.phi1[k] - 0.5)));
          rec = std::max(rec, std::fabs(0.5 * z * s.phi1_half[k] - (s.phi0_half[k] - 1.0)));
          half = std::max(half, std::fabs(s.E_half[k] * s.E_half[k] - s.E[k]) /
                                    std::max(s.E[k], 1e-300));
        }
        CHECK(bounded);
        CHECK(rec < 1e-10);
        CHECK(half < 1e-13);
      }
    }
  }
}
