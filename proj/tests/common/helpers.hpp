#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <numbers>
#include <random>

#include "rdspec/aligned.hpp"
#include "rdspec/grid.hpp"

namespace testing {

inline rdspec::RealField random_field(std::size_t n, std::uint64_t seed, double lo = -1.0,
                                      double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  rdspec::RealField f(n);
  for (auto& x : f) x = dist(rng);
  return f;
}

inline double max_diff(const rdspec::RealField& a, const rdspec::RealField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

template <class F>
rdspec::RealField sample(const rdspec::GridSpec& g, F&& f) {
  rdspec::RealField out(g.size());
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double y = g.dims == 2 ? g.coords[1][j] : 0.0;
      out[j * g.nx() + i] = f(g.coords[0][i], y);
    }
  }
  return out;
}

// Fresh directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("rdspec_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline constexpr double pi = std::numbers::pi;

}  // namespace testing
