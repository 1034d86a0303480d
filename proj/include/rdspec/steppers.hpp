#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rdspec/exp_tables.hpp"
#include "rdspec/grid.hpp"
#include "rdspec/models.hpp"
#include "rdspec/state.hpp"
#include "rdspec/transform.hpp"

namespace rdspec {

enum class Scheme { rk4, ck45, etdrk4, etdrk4b };

std::string_view scheme_name(Scheme s);
/// Throws std::invalid_argument naming the valid identifiers.
Scheme parse_scheme(std::string_view name);
const std::vector<std::string>& scheme_names();

/// Raised when a step produces non-finite values or exceeds the blow-up bound.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(const std::string& what, double t, double max_abs)
      : std::runtime_error(what), time(t), max_abs(max_abs) {}
  double time;
  double max_abs;
};

struct StepperOptions {
  bool dealias = false;           // 2/3-rule mask on the nonlinear term
  double blowup_threshold = 1e10;
};

struct StepControl {
  double dt = 0.1;
  double rel_tol = 1e-4;
  double safety = 0.9;
  double dt_min = 1e-6;
  double dt_max = 2.0;
  double abs_floor = 1e-8;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Throws std::invalid_argument when the control violates its invariants.
void validate(const StepControl& control);

/// A model bound to a grid: linear symbol, transforms, scratch buffers,
/// cached exponential tables and work counters. Single owner; one per run.
class SpectralSystem {
 public:
  SpectralSystem(ModelSpec model, GridSpec grid, StepperOptions options = {});
  SpectralSystem(const SpectralSystem&) = delete;
  SpectralSystem& operator=(const SpectralSystem&) = delete;
  ~SpectralSystem();

  const ModelSpec& model() const { return model_; }
  const GridSpec& grid() const { return grid_; }
  const LinearSymbol& symbol() const { return symbol_; }
  const StepperOptions& options() const { return options_; }
  int species() const { return model_.species; }

  /// Tables for dt, built on first use and cached by dt.
  const ExpTables& tables(double dt);

  /// N_s = F[reaction_s(F^-1 stage)] for every species.
  void nonlinear(const std::vector<ComplexField>& stage, std::vector<ComplexField>& out,
                 double t);
  /// Same, starting from synchronized physical fields.
  void nonlinear_physical(const std::vector<RealField>& fields, std::vector<ComplexField>& out,
                          double t);

  /// Recomputes the physical fields of state from its spectral fields and
  /// checks them against the blow-up bound.
  void synchronize(State& state);

  std::size_t reaction_evaluations() const { return reaction_evaluations_; }
  std::size_t forward_transforms() const { return transform_.forward_count(); }
  std::size_t inverse_transforms() const { return transform_.inverse_count(); }

  /// Embedded error field (5th minus 4th order, physical) of the last CK45 attempt.
  const std::vector<RealField>& last_error_field() const;

  // Scratch shared by the step functions.
  struct Workspace;
  Workspace& workspace() { return *work_; }
  SpectralTransform& transform() { return transform_; }
  void check_finite(const std::vector<RealField>& fields, double t) const;

 private:
  ModelSpec model_;
  GridSpec grid_;
  StepperOptions options_;
  LinearSymbol symbol_;
  SpectralTransform transform_;
  RealField dealias_mask_;
  std::map<double, ExpTables> table_cache_;
  std::vector<RealField> phys_;
  std::vector<RealField> rates_;
  std::unique_ptr<Workspace> work_;
  std::size_t reaction_evaluations_ = 0;
};

/// Integrating-factor classical RK4. Four reaction evaluations per step.
void if_rk4_step(SpectralSystem& sys, State& state, const ExpTables& tables, double dt);

/// Krogstad's exponential RK4.
void etdrk4b_step(SpectralSystem& sys, State& state, const ExpTables& tables, double dt);

/// Cox-Matthews exponential RK4.
void etdrk4_step(SpectralSystem& sys, State& state, const ExpTables& tables, double dt);

struct Ck45Result {
  bool accepted = false;
  double dt_used = 0.0;
  double scaled_error = 0.0;   // <= 1 means accepted
  double error_estimate = 0.0; // max-abs embedded difference
  double next_dt = 0.0;
};

/// One attempt of the adaptive integrating-factor Cash-Karp 4(5) pair with
/// local extrapolation. The attempted step is min(control.dt, max_dt). On
/// acceptance the state advances; either way control.dt becomes the proposal
/// for the next attempt. Throws NumericalAbort when a step at dt_min is
/// rejected.
Ck45Result if_ck45_step(SpectralSystem& sys, State& state, StepControl& control,
                        double max_dt = std::numeric_limits<double>::infinity());

}  // namespace rdspec
