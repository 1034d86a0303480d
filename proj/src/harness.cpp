#include "rdspec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "rdspec/adi.hpp"
#include "rdspec/integrate.hpp"
#include "rdspec/postprocess.hpp"
#include "rdspec/steppers.hpp"

namespace rdspec {

namespace fs = std::filesystem;

ResolvedRun resolve(const RunConfig& c) {
  ModelSpec model = make_model(c.model, c.params);
  const std::size_t n = c.n.value_or(model.default_grid.n);
  const double L = c.half_length.value_or(model.default_grid.half_length);
  GridSpec grid = make_grid(n, L, model.default_grid.dims);
  const double dt = c.dt.value_or(model.default_dt);
  return {std::move(model), std::move(grid), dt};
}

namespace {

void write_summary(const fs::path& file, const RunConfig& c, const RunSummary& s,
                   const std::string& status) {
  std::ofstream out(file, std::ios::trunc);
  out << "status = " << status << '\n';
  out << "model = " << c.model << '\n';
  out << "scheme = " << c.scheme << '\n';
  out << "t_final = " << format_double(s.final_state.t) << '\n';
  out << "accepted_steps = " << s.steps << '\n';
  out << "rejected_steps = " << s.rejected << '\n';
  out << "reaction_evaluations = " << s.reaction_evaluations << '\n';
  out << "forward_transforms = " << s.forward_transforms << '\n';
  out << "inverse_transforms = " << s.inverse_transforms << '\n';
  out << "snapshots = " << s.snapshots << '\n';
  out << "wall_seconds = " << format_double(s.wall_seconds) << '\n';
  if (!s.step_sizes.empty()) {
    const double mean = std::accumulate(s.step_sizes.begin(), s.step_sizes.end(), 0.0) /
                        static_cast<double>(s.step_sizes.size());
    out << "mean_dt = " << format_double(mean) << '\n';
  }
  if (s.abort_reason) {
    out << "abort_reason = " << *s.abort_reason << '\n';
    out << "abort_time = " << format_double(s.abort_time) << '\n';
  }
}

void write_spacetime(const fs::path& dir, const GridSpec& grid,
                     const std::vector<double>& times,
                     const std::vector<std::vector<RealField>>& frames) {
  if (frames.empty()) return;
  const std::size_t species = frames.front().size();
  for (std::size_t s = 0; s < species; ++s) {
    std::ofstream out(dir / ("spacetime_s" + std::to_string(s) + ".csv"), std::ios::trunc);
    out << "x";
    for (double t : times) out << ',' << format_double(t);
    out << '\n';
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      out << format_double(grid.coords[0][i]);
      for (const auto& frame : frames) out << ',' << format_double(frame[s][i]);
      out << '\n';
    }
  }
}

int run_adi(const RunConfig& c, const ResolvedRun& r, const fs::path& dir, std::ostream& log) {
  SnapshotWriter writer(dir, c.model, r.grid, 1, c.snap_every);
  RunSummary s;
  s.scheme = Scheme::rk4;
  try {
    const AdiSummary a = adi_integrate(
        r.model, r.grid, r.dt, c.t_final, c.snap_every,
        [&](double t, const RealField& u) { writer.write(t, {u}); });
    s.steps = a.steps;
    s.snapshots = writer.count();
    s.wall_seconds = a.wall_seconds;
    s.final_state.t = a.t_final;
    write_summary(dir / "summary.txt", c, s, "ok");
    std::ofstream timing(dir / "summary.txt", std::ios::app);
    timing << "linear_algebra_seconds = " << format_double(a.linear_algebra_seconds) << '\n';
    timing << "reaction_seconds = " << format_double(a.reaction_seconds) << '\n';
  } catch (const NumericalAbort& e) {
    s.snapshots = writer.count();
    s.abort_reason = e.what();
    s.abort_time = e.time;
    write_summary(dir / "summary.txt", c, s, "aborted");
    log << "aborted: " << e.what() << '\n';
    return exit_numerical;
  }
  log << "adi: " << s.steps << " steps, " << s.snapshots << " snapshots -> " << dir.string()
      << '\n';
  return exit_ok;
}

}  // namespace

int run(const RunConfig& c, std::ostream& log, std::ostream& err) {
  const auto problems = validate(c);
  if (!problems.empty()) {
    for (const auto& p : problems) err << "error: " << p << '\n';
    return exit_validation;
  }
  ResolvedRun r;
  try {
    r = resolve(c);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  }
  const fs::path dir(c.out);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "config.txt", std::ios::trunc);
    cfg << serialize_config(c);
  }
  if (c.scheme == "adi") return run_adi(c, r, dir, log);

  IntegrateOptions opt;
  opt.scheme = parse_scheme(c.scheme);
  opt.dt = r.dt;
  opt.control.rel_tol = c.rel_tol;
  opt.t_final = c.t_final;
  opt.snapshot_every = c.snap_every;
  opt.stepper.dealias = c.dealias;

  SnapshotWriter writer(dir, c.model, r.grid, r.model.species, c.snap_every);
  std::vector<double> times;
  std::vector<std::vector<RealField>> frames;
  const bool one_d = r.grid.dims == 1;
  auto sink = [&](const State& st) {
    writer.write(st.t, st.u);
    if (one_d) {
      times.push_back(st.t);
      frames.push_back(st.u);
    }
  };

  int code = exit_ok;
  RunSummary summary;
  try {
    summary = integrate(r.model, r.grid, opt, sink);
    write_summary(dir / "summary.txt", c, summary, "ok");
  } catch (const IntegrationAbort& e) {
    summary = e.partial;
    write_summary(dir / "summary.txt", c, summary, "aborted");
    log << "aborted at t=" << format_double(e.time) << ": " << e.what() << '\n';
    code = exit_numerical;
  } catch (const NumericalAbort& e) {
    summary.abort_reason = e.what();
    summary.abort_time = e.time;
    write_summary(dir / "summary.txt", c, summary, "aborted");
    log << "aborted at t=" << format_double(e.time) << ": " << e.what() << '\n';
    code = exit_numerical;
  }
  if (one_d) write_spacetime(dir, r.grid, times, frames);
  if (code == exit_ok) {
    log << c.scheme << ": " << summary.steps << " steps";
    if (summary.rejected) log << " (" << summary.rejected << " rejected)";
    log << ", " << writer.count() << " snapshots -> " << dir.string() << '\n';
  }
  return code;
}

std::vector<RealField> final_fields(const ModelSpec& model, const GridSpec& grid,
                                    const std::string& scheme, double dt, double t_final,
                                    bool dealias, std::size_t* steps) {
  if (scheme == "adi") {
    const AdiSummary a = adi_integrate(model, grid, dt, t_final);
    if (steps) *steps = a.steps;
    return {a.final_field};
  }
  IntegrateOptions opt;
  opt.scheme = parse_scheme(scheme);
  opt.dt = dt;
  opt.t_final = t_final;
  opt.stepper.dealias = dealias;
  RunSummary s = integrate(model, grid, opt);
  if (steps) *steps = s.steps;
  return std::move(s.final_state.u);
}

double CompareResult::error(const std::string& scheme, double dt) const {
  for (const auto& r : rows) {
    if (r.scheme == scheme && r.dt == dt) return r.error;
  }
  throw std::out_of_range("no comparison row for " + scheme);
}

CompareResult compare(const CompareConfig& c, std::ostream& log) {
  ModelSpec model = make_model(c.model, c.params);
  if (c.pure_diffusion) model = without_reaction(std::move(model));
  const GridSpec grid = make_grid(c.n.value_or(model.default_grid.n),
                                  c.half_length.value_or(model.default_grid.half_length),
                                  model.default_grid.dims);
  for (const auto& s : c.schemes) {
    if (s == "adi") {
      if (model.name != "fisher2d") throw std::invalid_argument("scheme adi needs fisher2d");
    } else {
      parse_scheme(s);
    }
  }
  if (c.dts.empty() || std::any_of(c.dts.begin(), c.dts.end(), [](double d) { return !(d > 0); })) {
    throw std::invalid_argument("compare needs positive time steps");
  }

  CompareResult result;
  const auto g0 = std::chrono::steady_clock::now();
  const auto gold = final_fields(model, grid, c.gold_scheme, c.gold_dt, c.t_final, c.dealias);
  result.gold_wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - g0).count();
  log << "gold " << c.gold_scheme << " dt=" << format_double(c.gold_dt) << " done in "
      << result.gold_wall_seconds << " s\n";

  for (const auto& s : c.schemes) {
    for (double dt : c.dts) result.rows.push_back({s, dt});
  }
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < result.rows.size(); i = next++) {
      CompareRow& row = result.rows[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const auto f = final_fields(model, grid, row.scheme, row.dt, c.t_final, c.dealias,
                                    &row.steps);
        row.error = max_abs_error(f, gold);
      } catch (const NumericalAbort& e) {
        row.error = std::numeric_limits<double>::infinity();
        row.status = "aborted";
      }
      row.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::lock_guard lock(log_mutex);
      log << row.scheme << " dt=" << format_double(row.dt) << " error=" << row.error << '\n';
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(c.jobs, result.rows.size()));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& s : c.schemes) {
    std::vector<double> dts, errs;
    for (const auto& r : result.rows) {
      if (r.scheme == s && std::isfinite(r.error) && r.error > 0) {
        dts.push_back(r.dt);
        errs.push_back(r.error);
      }
    }
    result.slopes[s] = dts.size() >= 2 ? convergence_slope(dts, errs)
                                       : std::numeric_limits<double>::quiet_NaN();
  }

  if (!c.out.empty()) {
    const fs::path dir(c.out);
    fs::create_directories(dir);
    std::ofstream errors(dir / "errors.csv", std::ios::trunc);
    errors << "scheme,dt,max_abs_error,steps,wall_seconds,status\n";
    for (const auto& r : result.rows) {
      errors << r.scheme << ',' << format_double(r.dt) << ',' << format_double(r.error) << ','
             << r.steps << ',' << format_double(r.wall_seconds) << ',' << r.status << '\n';
    }
    std::ofstream slopes(dir / "slopes.csv", std::ios::trunc);
    slopes << "scheme,slope\n";
    for (const auto& s : c.schemes) {
      slopes << s << ',' << format_double(result.slopes[s]) << '\n';
    }
  }
  return result;
}

fs::path upsample_snapshot(const fs::path& bin_path, std::size_t new_nx, std::size_t new_ny) {
  const Snapshot snap = read_snapshot(bin_path);
  Snapshot up = snap;
  if (snap.dims == 1) new_ny = 1;
  up.n = {new_nx, new_ny};
  for (auto& f : up.fields) {
    f = snap.dims == 1 ? fourier_upsample_1d(f, new_nx)
                       : fourier_upsample_2d(f, snap.n[0], snap.n[1], new_nx, new_ny);
  }
  fs::path out = bin_path;
  out.replace_filename(bin_path.stem().string() + "_up" + std::to_string(new_nx) + "x" +
                       std::to_string(new_ny) + ".bin");
  write_single_snapshot(out, snapshot_model(bin_path), up);
  return out;
}

}  // namespace rdspec
