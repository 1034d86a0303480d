#include "rdspec/cli.hpp"

#include <CLI11.hpp>

#include <sstream>

#include "rdspec/harness.hpp"
#include "rdspec/io.hpp"
#include "rdspec/models.hpp"
#include "rdspec/steppers.hpp"

namespace rdspec {

namespace {

struct RunFlags {
  std::string config;
  std::string model, scheme, out;
  std::size_t n = 0;
  double L = 0, dt = 0, tol = 0, t_final = 0, snap_every = 0;
  bool dealias = false;
  std::vector<std::string> params;
};

void add_param_option(CLI::App* cmd, std::vector<std::string>& params) {
  cmd->add_option("--param", params, "Model parameter override key=value (repeatable)")
      ->allow_extra_args(false);
}

std::pair<std::string, std::string> split_param(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("--param expects key=value, got '" + kv + "'");
  }
  return {kv.substr(0, eq), kv.substr(eq + 1)};
}

RunConfig build_run_config(CLI::App* cmd, const RunFlags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
  auto given = [&](const char* name) { return cmd->count(name) > 0; };
  if (given("--model")) c.model = f.model;
  if (given("--scheme")) c.scheme = f.scheme;
  if (given("--out")) c.out = f.out;
  if (given("--n")) c.n = f.n;
  if (given("--L")) c.half_length = f.L;
  if (given("--dt")) c.dt = f.dt;
  if (given("--tol")) c.rel_tol = f.tol;
  if (given("--t-final")) c.t_final = f.t_final;
  if (given("--snap-every")) c.snap_every = f.snap_every;
  if (given("--dealias")) c.dealias = f.dealias;
  for (const auto& kv : f.params) {
    auto [k, v] = split_param(kv);
    set_config_value(c, "param." + k, v);
  }
  return c;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudospectral reaction-diffusion solvers", "rdspec"};
  app.require_subcommand(1);

  RunFlags rf;
  auto* run_cmd = app.add_subcommand("run", "Integrate one model and write its run directory");
  run_cmd->add_option("--config", rf.config, "key = value config file")->check(CLI::ExistingFile);
  run_cmd->add_option("--model", rf.model, "Model name");
  run_cmd->add_option("--scheme", rf.scheme, "rk4, ck45, etdrk4, etdrk4b or adi");
  run_cmd->add_option("--n", rf.n, "Points per axis");
  run_cmd->add_option("--L", rf.L, "Half length of the periodic domain");
  run_cmd->add_option("--dt", rf.dt, "Time step (initial step for ck45)");
  run_cmd->add_option("--tol", rf.tol, "ck45 relative tolerance");
  run_cmd->add_option("--t-final", rf.t_final, "End time");
  run_cmd->add_option("--snap-every", rf.snap_every, "Snapshot cadence (0: first and last)");
  run_cmd->add_option("--out", rf.out, "Output directory");
  run_cmd->add_flag("--dealias", rf.dealias, "Apply the 2/3 mask to the nonlinear term");
  add_param_option(run_cmd, rf.params);

  CompareConfig cc;
  std::string schemes = "rk4,etdrk4,etdrk4b";
  std::vector<std::string> cmp_params;
  auto* cmp_cmd = app.add_subcommand("compare", "Convergence study against a gold run");
  cmp_cmd->add_option("--model", cc.model, "Model name");
  cmp_cmd->add_option("--n", cc.n, "Points per axis");
  cmp_cmd->add_option("--L", cc.half_length, "Half length of the periodic domain");
  cmp_cmd->add_option("--t-final", cc.t_final, "End time")->capture_default_str();
  cmp_cmd->add_option("--schemes", schemes, "Comma-separated schemes")->capture_default_str();
  cmp_cmd->add_option("--dt", cc.dts, "Time steps")->delimiter(',')->capture_default_str();
  cmp_cmd->add_option("--gold-scheme", cc.gold_scheme, "Gold standard scheme")
      ->capture_default_str();
  cmp_cmd->add_option("--gold-dt", cc.gold_dt, "Gold standard step")->capture_default_str();
  cmp_cmd->add_option("--jobs", cc.jobs, "Concurrent member runs")->capture_default_str();
  cmp_cmd->add_option("--out", cc.out, "Directory for errors.csv and slopes.csv");
  cmp_cmd->add_flag("--dealias", cc.dealias, "Apply the 2/3 mask to the nonlinear term");
  cmp_cmd->add_flag("--pure-diffusion", cc.pure_diffusion, "Zero the reaction terms");
  add_param_option(cmp_cmd, cmp_params);

  std::string snap_path;
  std::size_t up_nx = 0, up_ny = 0;
  auto* up_cmd = app.add_subcommand("upsample", "Fourier-upsample a snapshot");
  up_cmd->add_option("snapshot", snap_path, "Snapshot payload (.bin)")
      ->required()
      ->check(CLI::ExistingFile);
  up_cmd->add_option("--nx", up_nx, "New points along x")->required();
  up_cmd->add_option("--ny", up_ny, "New points along y (2D; defaults to nx)");

  app.add_subcommand("list-models", "Print the registered model names");

  std::string describe_name;
  auto* desc_cmd = app.add_subcommand("describe", "Print one model's registry entry");
  desc_cmd->add_option("model", describe_name, "Model name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? exit_ok : exit_validation;
  }

  try {
    if (*run_cmd) return run(build_run_config(run_cmd, rf), out, err);

    if (*cmp_cmd) {
      cc.schemes = split_list(schemes);
      for (const auto& kv : cmp_params) {
        auto [k, v] = split_param(kv);
        RunConfig tmp;
        set_config_value(tmp, "param." + k, v);
        cc.params[k] = tmp.params[k];
      }
      CompareResult r;
      try {
        r = compare(cc, err);
      } catch (const NumericalAbort& e) {
        err << "gold standard aborted: " << e.what() << '\n';
        return exit_numerical;
      }
      out << "scheme,dt,max_abs_error\n";
      for (const auto& row : r.rows) {
        out << row.scheme << ',' << format_double(row.dt) << ',' << format_double(row.error)
            << '\n';
      }
      out << "scheme,slope\n";
      for (const auto& s : cc.schemes) out << s << ',' << format_double(r.slopes[s]) << '\n';
      return exit_ok;
    }

    if (*up_cmd) {
      const auto path = upsample_snapshot(snap_path, up_nx, up_ny ? up_ny : up_nx);
      out << path.string() << '\n';
      return exit_ok;
    }

    if (app.got_subcommand("list-models")) {
      for (const auto& name : model_names()) out << name << '\n';
      return exit_ok;
    }

    if (*desc_cmd) {
      out << describe_model(describe_name);
      return exit_ok;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  }
  return exit_validation;
}

}  // namespace rdspec
