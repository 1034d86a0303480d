#include <doctest.h>

#include "helpers.hpp"
#include "rdspec/postprocess.hpp"

using namespace rdspec;

namespace {

struct Mode {
  int kx, ky;
  double a, b;
};

std::vector<Mode> random_modes(std::size_t nx, std::size_t ny, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> kxd(0, static_cast<int>(nx / 2) - 1);
  std::uniform_int_distribution<int> kyd(ny > 1 ? -(static_cast<int>(ny / 2) - 1) : 0,
                                         ny > 1 ? static_cast<int>(ny / 2) - 1 : 0);
  std::vector<Mode> modes;
  for (int m = 0; m < 8; ++m) modes.push_back({kxd(rng), kyd(rng), amp(rng), amp(rng)});
  return modes;
}

RealField eval_modes(const GridSpec& g, const std::vector<Mode>& modes) {
  return testing::sample(g, [&](double x, double y) {
    double s = 0.0;
    for (const auto& m : modes) {
      const double ph = m.kx * testing::pi * x / g.half_length[0] +
                        (g.dims == 2 ? m.ky * testing::pi * y / g.half_length[1] : 0.0);
      s += m.a * std::cos(ph) + m.b * std::sin(ph);
    }
    return s;
  });
}

}  // namespace

TEST_CASE("upsampling: constants, identity and a single cosine") {
  const RealField c(8, 0.3);
  for (double x : fourier_upsample_1d(c, 32)) CHECK(x == doctest::Approx(0.3).epsilon(1e-14));

  const auto f = testing::random_field(16, 3);
  CHECK(testing::max_diff(fourier_upsample_1d(f, 16), f) < 1e-14);

  const auto g8 = make_grid(8, testing::pi, 1);
  const auto g32 = make_grid(32, testing::pi, 1);
  const auto up = fourier_upsample_1d(testing::sample(g8, [](double x, double) { return std::cos(x); }),
                                      32);
  CHECK(testing::max_diff(up, testing::sample(g32, [](double x, double) { return std::cos(x); })) <
        1e-14);

  CHECK_THROWS_AS(fourier_upsample_1d(f, 8), std::invalid_argument);
  CHECK_THROWS_AS(fourier_upsample_2d(f, 4, 3, 8, 8), std::invalid_argument);
  CHECK_THROWS_AS(fourier_upsample_2d(f, 4, 4, 2, 8), std::invalid_argument);
}

TEST_CASE("upsampling keeps the coarse nodes and the mean") {
  const auto f = testing::random_field(24, 7);
  const auto up = fourier_upsample_1d(f, 96);
  double mf = 0.0, mu = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(up[4 * i] == doctest::Approx(f[i]).epsilon(1e-13));
    mf += f[i];
  }
  for (double x : up) mu += x;
  CHECK(mu / 96.0 == doctest::Approx(mf / 24.0).epsilon(1e-13));
}

TEST_CASE("upsampling reproduces band-limited fields") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto modes = random_modes(16, 1, seed);
    const auto coarse = eval_modes(make_grid(16, 7.5, 1), modes);
    const auto fine = eval_modes(make_grid(64, 7.5, 1), modes);
    CHECK(testing::max_diff(fourier_upsample_1d(coarse, 64), fine) < 1e-11);

    const auto modes2 = random_modes(16, 8, seed + 100);
    const auto g = make_grid({16, 8}, {7.5, 3.0}, 2);
    const auto gf = make_grid({64, 32}, {7.5, 3.0}, 2);
    const auto up = fourier_upsample_2d(eval_modes(g, modes2), 16, 8, 64, 32);
    CHECK(testing::max_diff(up, eval_modes(gf, modes2)) < 1e-11);
  }
}

TEST_CASE("2D upsampling along x only matches row-wise 1D upsampling") {
  const std::size_t nx = 8, ny = 6;
  const auto f = testing::random_field(nx * ny, 11);
  const auto up = fourier_upsample_2d(f, nx, ny, 20, ny);
  for (std::size_t j = 0; j < ny; ++j) {
    const std::span<const double> row(f.data() + j * nx, nx);
    const auto r = fourier_upsample_1d(row, 20);
    for (std::size_t i = 0; i < 20; ++i) CHECK(up[j * 20 + i] == doctest::Approx(r[i]).epsilon(1e-13));
  }
}

TEST_CASE("front position") {
  const auto g = make_grid(512, 50.0, 1);
  const auto tanh_front =
      testing::sample(g, [](double x, double) { return 0.5 * (1.0 - std::tanh(x - 5.0)); });
  const auto x = front_position(tanh_front, g, 0.5);
  REQUIRE(x);
  CHECK(*x == doctest::Approx(5.0).epsilon(1e-3));

  RealField step(g.size(), 0.0);
  for (std::size_t i = 0; i < 100; ++i) step[i] = 1.0;
  const auto s = front_position(step, g, 0.5);
  REQUIRE(s);
  CHECK(*s == doctest::Approx(g.coords[0][99] + 0.5 * g.spacing()));

  CHECK_FALSE(front_position(RealField(g.size(), 0.0), g).has_value());

  const auto bump = testing::sample(g, [](double x, double) { return std::exp(-x * x); });
  const auto right = front_position(bump, g, 0.5, FrontDirection::rightmost);
  const auto left = front_position(bump, g, 0.5, FrontDirection::leftmost);
  REQUIRE(right);
  REQUIRE(left);
  CHECK(*right == doctest::Approx(std::sqrt(std::log(2.0))).epsilon(5e-3));
  CHECK(*left == -*right);

  CHECK_THROWS_AS(front_position(bump, make_grid(16, 1.0, 2), 0.5), std::invalid_argument);
}

TEST_CASE("front speed") {
  FrontTrace tr;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> noise(-1e-6, 1e-6);
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.1 * i;
    tr.record(t, 3.0 * t + noise(rng));
  }
  tr.record(10.5, std::nullopt);
  CHECK(tr.times.size() == 101);
  CHECK(front_speed(tr) == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(front_speed(tr, 0.0, 10.0) == doctest::Approx(3.0).epsilon(1e-5));

  FrontTrace shifted = tr;
  for (auto& x : shifted.positions) x += 17.0;
  CHECK(front_speed(shifted) == doctest::Approx(front_speed(tr)).epsilon(1e-12));

  CHECK_THROWS_AS(front_speed(tr, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(front_speed(FrontTrace{}), std::invalid_argument);
}

TEST_CASE("pulse count") {
  const auto g = make_grid(256, 50.0, 1);
  auto bumps = [&](std::vector<double> centres) {
    return testing::sample(g, [&](double x, double) {
      double s = 0.0;
      for (double c : centres) s += std::exp(-(x - c) * (x - c));
      return s;
    });
  };
  CHECK(pulse_count(bumps({0.0}), 0.5) == 1);
  CHECK(pulse_count(bumps({-20.0, 20.0}), 0.5) == 2);
  CHECK(pulse_count(bumps({-20.0, 20.0}), 2.0) == 0);
  CHECK(pulse_count(bumps({-20.0, 20.0}), g, 0.5) == 2);
  CHECK(pulse_count(RealField(g.size(), 1.0), 0.5) == 0);
  CHECK_THROWS_AS(pulse_count(bumps({0.0}), 0.0), std::invalid_argument);

  const auto g2 = make_grid(64, 10.0, 2);
  const auto two = testing::sample(g2, [](double x, double y) {
    return std::exp(-((x - 4) * (x - 4) + y * y)) + std::exp(-((x + 4) * (x + 4) + (y - 3) * (y - 3)));
  });
  CHECK(pulse_count(two, g2, 0.5) == 2);
  CHECK_THROWS_AS(pulse_count(two, g2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(pulse_count(two, g, 0.5), std::invalid_argument);
}

TEST_CASE("error norms and slopes") {
  const RealField a{1.0, 2.0, 3.0}, b{1.0, 2.5, 2.0};
  CHECK(max_abs_error(a, b) == 1.0);
  CHECK(max_abs_error(std::vector<RealField>{a, a}, std::vector<RealField>{a, b}) == 1.0);
  CHECK_THROWS_AS(max_abs_error(a, RealField{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(max_abs_error(std::vector<RealField>{a}, std::vector<RealField>{a, a}),
                  std::invalid_argument);

  const std::vector<double> dts{0.4, 0.2, 0.1, 0.05};
  std::vector<double> errs;
  for (double dt : dts) errs.push_back(7.0 * std::pow(dt, 4));
  CHECK(convergence_slope(dts, errs) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS_AS(convergence_slope(std::vector<double>{0.1}, std::vector<double>{1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(convergence_slope(std::vector<double>{0.1, 0.1}, std::vector<double>{1.0, 2.0}),
                  std::invalid_argument);
}
