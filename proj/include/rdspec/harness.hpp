#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rdspec/aligned.hpp"
#include "rdspec/grid.hpp"
#include "rdspec/io.hpp"
#include "rdspec/models.hpp"

namespace rdspec {

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_numerical = 2 };

/// Model and grid a configuration resolves to.
struct ResolvedRun {
  ModelSpec model;
  GridSpec grid;
  double dt;
};
ResolvedRun resolve(const RunConfig& config);

/// Validates, integrates and writes the run directory:
///   config.txt, run.txt + snap_NNNNNN.bin, summary.txt, and for 1D models
///   spacetime_s<k>.csv (first row "x,t0,t1,...", one row per grid point).
/// Validation problems go to err, one per line.
int run(const RunConfig& config, std::ostream& log, std::ostream& err);

struct CompareConfig {
  std::string model = "gray1d";
  std::map<std::string, double> params;
  std::optional<std::size_t> n;
  std::optional<double> half_length;
  double t_final = 200.0;
  std::string gold_scheme = "etdrk4b";
  double gold_dt = 1e-3;
  std::vector<std::string> schemes{"rk4", "etdrk4", "etdrk4b"};
  std::vector<double> dts{0.8, 0.4, 0.2, 0.1};
  bool dealias = false;
  bool pure_diffusion = false;  // zero the reaction
  std::size_t jobs = 1;
  std::string out;  // empty: no files
};

struct CompareRow {
  std::string scheme;
  double dt = 0.0;
  double error = 0.0;  // max-abs against the gold run, inf when the run aborted
  std::size_t steps = 0;
  double wall_seconds = 0.0;
  std::string status = "ok";
};

struct CompareResult {
  std::vector<CompareRow> rows;
  std::map<std::string, double> slopes;  // fitted over the finite errors
  double gold_wall_seconds = 0.0;

  double error(const std::string& scheme, double dt) const;
};

/// Runs the gold standard, then every scheme at every dt (up to `jobs` at
/// once). Writes errors.csv and slopes.csv when out is set. A gold-standard
/// abort throws NumericalAbort. "adi" is accepted as a scheme for fisher2d.
CompareResult compare(const CompareConfig& config, std::ostream& log);

/// Final fields of a single run, for studies that drive the integrators
/// directly. "adi" runs the ADI stepper.
std::vector<RealField> final_fields(const ModelSpec& model, const GridSpec& grid,
                                    const std::string& scheme, double dt, double t_final,
                                    bool dealias = false, std::size_t* steps = nullptr);

/// Upsamples every species of a snapshot; writes <stem>_up<nx>x<ny>.bin next to it.
std::filesystem::path upsample_snapshot(const std::filesystem::path& bin_path,
                                        std::size_t new_nx, std::size_t new_ny);

}  // namespace rdspec
