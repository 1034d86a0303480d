#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdspec/aligned.hpp"
#include "rdspec/grid.hpp"

namespace rdspec {

/// Everything needed to reproduce a run. Unset optionals fall back to the
/// model's defaults.
struct RunConfig {
  std::string model = "gray1d";
  std::map<std::string, double> params;
  std::optional<std::size_t> n;
  std::optional<double> half_length;
  std::string scheme = "rk4";
  std::optional<double> dt;
  double rel_tol = 1e-4;
  double t_final = 0.0;
  double snap_every = 0.0;
  std::string out = "rdspec_out";
  bool dealias = false;
};

/// Every problem found, empty when the configuration is usable.
std::vector<std::string> validate(const RunConfig& config);

/// Flat "key = value" text; '#' starts a comment. Keys: model, scheme, n, L,
/// dt, tol, t_final, snap_every, out, dealias, param.<name>.
/// Throws std::invalid_argument on malformed lines or unknown keys.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);
/// Applies one key/value pair with the same rules as the file format.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);
std::string serialize_config(const RunConfig& config);

/// FNV-1a 64-bit over the little-endian payload bytes.
std::uint64_t payload_checksum(std::span<const double> payload);

/// One persisted output frame.
struct Snapshot {
  double time = 0.0;
  int dims = 1;
  std::array<std::size_t, 2> n{0, 1};
  std::array<double, 2> half_length{0.0, 0.0};
  std::vector<RealField> fields;  // per species, row-major, x fastest

  std::size_t points() const { return n[0] * n[1]; }
};

/// Writes the payload of every species as little-endian float64.
void write_payload(const std::filesystem::path& file, const Snapshot& snap);

/// Run directory layout: run.txt (header, one "snapshot" line per frame)
/// plus snap_NNNNNN.bin payloads.
class SnapshotWriter {
 public:
  SnapshotWriter(std::filesystem::path dir, std::string model, const GridSpec& grid, int species,
                 double snap_every);
  /// Returns the payload path.
  std::filesystem::path write(double time, const std::vector<RealField>& fields);
  std::size_t count() const { return count_; }

 private:
  std::filesystem::path dir_;
  std::size_t count_ = 0;
};

/// Writes a stand-alone frame: <stem>.bin plus a <stem>.txt header.
void write_single_snapshot(const std::filesystem::path& bin_path, const std::string& model,
                           const Snapshot& snap);

/// Reads a payload, locating its header (<stem>.txt, else run.txt in the same
/// directory) and validating the checksum. Throws std::runtime_error on any
/// inconsistency.
Snapshot read_snapshot(const std::filesystem::path& bin_path);

/// Model name recorded in the header that describes bin_path.
std::string snapshot_model(const std::filesystem::path& bin_path);

/// 17 significant digits.
std::string format_double(double x);

}  // namespace rdspec
