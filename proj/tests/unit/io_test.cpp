#include <doctest.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "rdspec/io.hpp"

using namespace rdspec;

namespace {

bool contains(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# gray run\n"
      "model = gray2d\n"
      "scheme = ck45   # adaptive\n"
      "\n"
      "n = 128\n"
      "L = 20\n"
      "tol = 1e-5\n"
      "t-final = 150\n"
      "snap_every = 10\n"
      "out = runs/gray\n"
      "dealias = yes\n"
      "param.asymmetric = 1\n");
  const auto c = parse_config(in);
  CHECK(c.model == "gray2d");
  CHECK(c.scheme == "ck45");
  CHECK(c.n == 128u);
  CHECK(c.half_length == 20.0);
  CHECK_FALSE(c.dt.has_value());
  CHECK(c.rel_tol == 1e-5);
  CHECK(c.t_final == 150.0);
  CHECK(c.snap_every == 10.0);
  CHECK(c.out == "runs/gray");
  CHECK(c.dealias);
  CHECK(c.params.at("asymmetric") == 1.0);
  CHECK(validate(c).empty());
}

TEST_CASE("config round trip") {
  RunConfig c;
  c.model = "labyrinthe2d";
  c.params = {{"eps", 4.0}, {"delta", 0.05}};
  c.n = 64;
  c.half_length = 100.0 / 3.0;
  c.scheme = "etdrk4b";
  c.dt = 0.1;
  c.t_final = 12.5;
  c.snap_every = 0.5;
  c.out = "x";
  c.dealias = true;
  std::istringstream in(serialize_config(c));
  const auto r = parse_config(in);
  CHECK(r.model == c.model);
  CHECK(r.params == c.params);
  CHECK(r.n == c.n);
  CHECK(r.half_length == c.half_length);
  CHECK(r.scheme == c.scheme);
  CHECK(r.dt == c.dt);
  CHECK(r.rel_tol == c.rel_tol);
  CHECK(r.t_final == c.t_final);
  CHECK(r.snap_every == c.snap_every);
  CHECK(r.out == c.out);
  CHECK(r.dealias == c.dealias);
  CHECK(serialize_config(r) == serialize_config(c));
}

TEST_CASE("config errors") {
  RunConfig c;
  CHECK_THROWS_AS(set_config_value(c, "colour", "red"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(c, "dt", "fast"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(c, "n", "-4"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(c, "dealias", "maybe"), std::invalid_argument);
  std::istringstream bad("model gray1d\n");
  CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/rdspec.cfg"), std::invalid_argument);
}

TEST_CASE("validation reports every problem") {
  RunConfig c;
  c.model = "gray1d";
  c.scheme = "adi";
  c.n = 7;
  c.half_length = -1.0;
  c.dt = 0.0;
  c.rel_tol = 0.0;
  c.t_final = -1.0;
  c.snap_every = -1.0;
  c.out = "";
  c.params = {{"zeta", 1.0}};
  const auto p = validate(c);
  CHECK(p.size() == 9);
  CHECK(contains(p, "zeta"));
  CHECK(contains(p, "adi"));
  CHECK(contains(p, "n must be even"));
  CHECK(contains(p, "L must be positive"));
  CHECK(contains(p, "dt must be positive"));
  CHECK(contains(p, "tol"));
  CHECK(contains(p, "t_final"));
  CHECK(contains(p, "snap_every"));
  CHECK(contains(p, "out"));

  RunConfig d;
  d.scheme = "euler";
  const auto q = validate(d);
  REQUIRE(q.size() == 1);
  for (const char* s : {"rk4", "ck45", "etdrk4", "etdrk4b", "adi"}) {
    CHECK(q[0].find(s) != std::string::npos);
  }
}

TEST_CASE("checksum") {
  CHECK(payload_checksum({}) == 0xcbf29ce484222325ull);
  const std::vector<double> a{1.0, 2.0};
  std::vector<double> b = a;
  b[1] = std::nextafter(2.0, 3.0);
  CHECK(payload_checksum(a) != payload_checksum(b));
  CHECK(payload_checksum(a) == payload_checksum(std::vector<double>{1.0, 2.0}));
}

TEST_CASE("snapshot series round trip") {
  testing::TempDir dir("io");
  const auto g = make_grid({8, 4}, {5.0, 2.5}, 2);
  SnapshotWriter w(dir.path(), "gray2d", g, 2, 0.5);
  std::vector<std::vector<RealField>> frames;
  for (int k = 0; k < 3; ++k) {
    frames.push_back({testing::random_field(g.size(), 10 + k), testing::random_field(g.size(), 20 + k)});
    w.write(0.5 * k, frames.back());
  }
  CHECK(w.count() == 3);
  CHECK(std::filesystem::exists(dir.path() / "run.txt"));
  for (int k = 0; k < 3; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%06d.bin", k);
    const auto path = dir.path() / name;
    CHECK(std::filesystem::file_size(path) == 2 * g.size() * sizeof(double));
    const auto s = read_snapshot(path);
    CHECK(s.time == 0.5 * k);
    CHECK(s.dims == 2);
    CHECK(s.n == std::array<std::size_t, 2>{8, 4});
    CHECK(s.half_length == std::array<double, 2>{5.0, 2.5});
    REQUIRE(s.fields.size() == 2);
    for (int sp = 0; sp < 2; ++sp) {
      CHECK(std::memcmp(s.fields[sp].data(), frames[k][sp].data(), g.size() * sizeof(double)) == 0);
    }
    CHECK(snapshot_model(path) == "gray2d");
  }
}

TEST_CASE("snapshot corruption is detected") {
  testing::TempDir dir("io");
  const auto g = make_grid(16, 5.0, 1);
  SnapshotWriter w(dir.path(), "fisher1d", g, 1, 0.0);
  const auto path = w.write(1.0, {testing::random_field(g.size(), 1)});
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(3);
    f.put('\x7f');
  }
  CHECK_THROWS_AS(read_snapshot(path), std::runtime_error);
  std::filesystem::resize_file(path, 8);
  CHECK_THROWS_AS(read_snapshot(path), std::runtime_error);
  CHECK_THROWS_AS(read_snapshot(dir.path() / "missing.bin"), std::runtime_error);
}

TEST_CASE("stand-alone snapshot") {
  testing::TempDir dir("io");
  Snapshot s;
  s.time = 2.5;
  s.dims = 1;
  s.n = {12, 1};
  s.half_length = {3.0, 0.0};
  s.fields = {testing::random_field(12, 4)};
  const auto path = dir.path() / "frame.bin";
  write_single_snapshot(path, "fisher1d", s);
  CHECK(std::filesystem::exists(dir.path() / "frame.txt"));
  const auto r = read_snapshot(path);
  CHECK(r.time == 2.5);
  CHECK(r.n == s.n);
  CHECK(testing::max_diff(r.fields[0], s.fields[0]) == 0.0);
  CHECK(snapshot_model(path) == "fisher1d");
}

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("shipped configs validate") {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(RDSPEC_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    INFO(entry.path().filename().string());
    const auto c = load_config(entry.path());
    CHECK(validate(c).empty());
    ++count;
  }
  CHECK(count >= 5);
}
