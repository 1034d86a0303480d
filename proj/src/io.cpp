#include "rdspec/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "rdspec/models.hpp"
#include "rdspec/steppers.hpp"

namespace rdspec {

namespace fs = std::filesystem;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw std::invalid_argument("config: '" + key + "' expects a number, got '" + value + "'");
  }
  return x;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw std::invalid_argument("config: '" + key + "' expects true/false, got '" + value + "'");
}

std::uint64_t to_little_endian(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::little) {
    return bits;
  } else {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((bits >> (8 * i)) & 0xFFu) << (8 * (7 - i));
    return r;
  }
}

std::string hex64(std::uint64_t x) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

void write_header_preamble(std::ostream& out, const std::string& model, int dims,
                           std::array<std::size_t, 2> n, std::array<double, 2> L, int species,
                           double snap_every) {
  out << "rdspec-snapshots 1\n";
  out << "model " << model << '\n';
  out << "dims " << dims << '\n';
  out << "n " << n[0] << ' ' << n[1] << '\n';
  out << "L " << format_double(L[0]) << ' ' << format_double(L[1]) << '\n';
  out << "species " << species << '\n';
  out << "snap_every " << format_double(snap_every) << '\n';
}

struct Header {
  std::string model;
  int dims = 0;
  std::array<std::size_t, 2> n{0, 0};
  std::array<double, 2> L{0.0, 0.0};
  int species = 0;
  struct Entry {
    double time;
    std::string file;
    std::uint64_t checksum;
  };
  std::vector<Entry> entries;
};

Header read_header(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("snapshot header not readable: " + path.string());
  Header h;
  std::string line;
  std::getline(in, line);
  if (trim(line) != "rdspec-snapshots 1") {
    throw std::runtime_error("not a snapshot header: " + path.string());
  }
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "model") {
      ls >> h.model;
    } else if (key == "dims") {
      ls >> h.dims;
    } else if (key == "n") {
      ls >> h.n[0] >> h.n[1];
    } else if (key == "L") {
      ls >> h.L[0] >> h.L[1];
    } else if (key == "species") {
      ls >> h.species;
    } else if (key == "snapshot") {
      std::size_t index = 0;
      std::string time;
      Header::Entry e{};
      std::string sum;
      ls >> index >> time >> e.file >> sum;
      e.time = std::stod(time);
      e.checksum = std::stoull(sum, nullptr, 16);
      h.entries.push_back(e);
    }
    if (ls.fail()) throw std::runtime_error("malformed snapshot header line: " + line);
  }
  if (h.dims < 1 || h.dims > 2 || h.species < 1 || h.n[0] == 0 || h.n[1] == 0) {
    throw std::runtime_error("incomplete snapshot header: " + path.string());
  }
  return h;
}

std::pair<Header, Header::Entry> locate(const fs::path& bin_path) {
  fs::path single = bin_path;
  single.replace_extension(".txt");
  const fs::path run = bin_path.parent_path() / "run.txt";
  for (const auto& candidate : {single, run}) {
    if (!fs::exists(candidate)) continue;
    Header h = read_header(candidate);
    for (const auto& e : h.entries) {
      if (e.file == bin_path.filename().string()) return {h, e};
    }
  }
  throw std::runtime_error("no header lists snapshot " + bin_path.string());
}

}  // namespace

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "model") {
    c.model = value;
  } else if (key == "scheme") {
    c.scheme = value;
  } else if (key == "n") {
    const double x = parse_double(key, value);
    if (x < 0 || x != std::floor(x)) {
      throw std::invalid_argument("config: 'n' expects a non-negative integer");
    }
    c.n = static_cast<std::size_t>(x);
  } else if (key == "L") {
    c.half_length = parse_double(key, value);
  } else if (key == "dt") {
    c.dt = parse_double(key, value);
  } else if (key == "tol") {
    c.rel_tol = parse_double(key, value);
  } else if (key == "t_final" || key == "t-final") {
    c.t_final = parse_double(key, value);
  } else if (key == "snap_every" || key == "snap-every") {
    c.snap_every = parse_double(key, value);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "dealias") {
    c.dealias = parse_bool(key, value);
  } else if (key.rfind("param.", 0) == 0 && key.size() > 6) {
    c.params[key.substr(6)] = parse_double(key, value);
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    set_config_value(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not readable: " + path.string());
  return parse_config(in);
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "model = " << c.model << '\n';
  out << "scheme = " << c.scheme << '\n';
  if (c.n) out << "n = " << *c.n << '\n';
  if (c.half_length) out << "L = " << format_double(*c.half_length) << '\n';
  if (c.dt) out << "dt = " << format_double(*c.dt) << '\n';
  out << "tol = " << format_double(c.rel_tol) << '\n';
  out << "t_final = " << format_double(c.t_final) << '\n';
  out << "snap_every = " << format_double(c.snap_every) << '\n';
  out << "out = " << c.out << '\n';
  out << "dealias = " << (c.dealias ? "true" : "false") << '\n';
  for (const auto& [k, v] : c.params) out << "param." << k << " = " << format_double(v) << '\n';
  return out.str();
}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> problems;
  std::optional<ModelSpec> model;
  try {
    model = make_model(c.model, c.params);
  } catch (const std::exception& e) {
    problems.emplace_back(e.what());
  }
  if (c.scheme == "adi") {
    if (c.model != "fisher2d") problems.emplace_back("scheme adi is only valid with fisher2d");
  } else {
    try {
      parse_scheme(c.scheme);
    } catch (const std::exception& e) {
      problems.emplace_back(std::string(e.what()) + " adi");
    }
  }
  if (c.n && (*c.n < 4 || *c.n % 2 != 0)) problems.emplace_back("n must be even and >= 4");
  if (c.half_length && !(*c.half_length > 0.0)) problems.emplace_back("L must be positive");
  if (c.dt && !(*c.dt > 0.0)) problems.emplace_back("dt must be positive");
  if (!(c.rel_tol > 0.0)) problems.emplace_back("tol must be positive");
  if (!(c.t_final >= 0.0) || !std::isfinite(c.t_final)) {
    problems.emplace_back("t_final must be finite and >= 0");
  }
  if (!(c.snap_every >= 0.0)) problems.emplace_back("snap_every must be >= 0");
  if (c.out.empty()) problems.emplace_back("out must name a directory");
  return problems;
}

std::uint64_t payload_checksum(std::span<const double> payload) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (double x : payload) {
    const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(x));
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xFFu;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

namespace {

RealField flatten(const std::vector<RealField>& fields) {
  RealField all;
  for (const auto& f : fields) all.insert(all.end(), f.begin(), f.end());
  return all;
}

}  // namespace

void write_payload(const fs::path& file, const Snapshot& snap) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  for (const auto& f : snap.fields) {
    for (double x : f) {
      const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(x));
      out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

SnapshotWriter::SnapshotWriter(fs::path dir, std::string model, const GridSpec& grid,
                               int species, double snap_every)
    : dir_(std::move(dir)) {
  fs::create_directories(dir_);
  std::ofstream header(dir_ / "run.txt", std::ios::trunc);
  if (!header) throw std::runtime_error("cannot write " + (dir_ / "run.txt").string());
  write_header_preamble(header, model, grid.dims, grid.n, grid.half_length, species, snap_every);
}

fs::path SnapshotWriter::write(double time, const std::vector<RealField>& fields) {
  char name[32];
  std::snprintf(name, sizeof name, "snap_%06zu.bin", count_);
  Snapshot snap;
  snap.time = time;
  snap.fields = fields;
  const fs::path file = dir_ / name;
  write_payload(file, snap);
  std::ofstream header(dir_ / "run.txt", std::ios::app);
  header << "snapshot " << count_ << ' ' << format_double(time) << ' ' << name << ' '
         << hex64(payload_checksum(flatten(fields))) << '\n';
  if (!header) throw std::runtime_error("cannot append to run.txt");
  ++count_;
  return file;
}

void write_single_snapshot(const fs::path& bin_path, const std::string& model,
                           const Snapshot& snap) {
  if (bin_path.has_parent_path()) fs::create_directories(bin_path.parent_path());
  write_payload(bin_path, snap);
  fs::path header_path = bin_path;
  header_path.replace_extension(".txt");
  std::ofstream header(header_path, std::ios::trunc);
  write_header_preamble(header, model, snap.dims, snap.n, snap.half_length,
                        static_cast<int>(snap.fields.size()), 0.0);
  header << "snapshot 0 " << format_double(snap.time) << ' ' << bin_path.filename().string() << ' '
         << hex64(payload_checksum(flatten(snap.fields))) << '\n';
  if (!header) throw std::runtime_error("cannot write " + header_path.string());
}

Snapshot read_snapshot(const fs::path& bin_path) {
  const auto [header, entry] = locate(bin_path);
  Snapshot snap;
  snap.time = entry.time;
  snap.dims = header.dims;
  snap.n = header.n;
  snap.half_length = header.L;
  const std::size_t points = header.n[0] * header.n[1];

  std::ifstream in(bin_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + bin_path.string());
  const auto bytes = fs::file_size(bin_path);
  if (bytes != points * header.species * sizeof(double)) {
    throw std::runtime_error("snapshot payload length does not match its header: " +
                             bin_path.string());
  }
  snap.fields.assign(header.species, RealField(points));
  for (auto& f : snap.fields) {
    for (double& x : f) {
      std::uint64_t bits = 0;
      in.read(reinterpret_cast<char*>(&bits), sizeof bits);
      x = std::bit_cast<double>(to_little_endian(bits));
    }
  }
  if (!in) throw std::runtime_error("short read: " + bin_path.string());
  if (payload_checksum(flatten(snap.fields)) != entry.checksum) {
    throw std::runtime_error("snapshot checksum mismatch: " + bin_path.string());
  }
  return snap;
}

std::string snapshot_model(const fs::path& bin_path) { return locate(bin_path).first.model; }

}  // namespace rdspec
