#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rdspec/grid.hpp"
#include "rdspec/models.hpp"
#include "rdspec/state.hpp"
#include "rdspec/steppers.hpp"

namespace rdspec {

using SnapshotSink = std::function<void(const State&)>;

struct IntegrateOptions {
  Scheme scheme = Scheme::rk4;
  double dt = 0.1;            // fixed step, or the initial step for ck45
  StepControl control;        // ck45 only; control.dt is replaced by dt
  double t_final = 0.0;
  double snapshot_every = 0.0;  // 0: only the initial and final states
  StepperOptions stepper;
};

struct RunSummary {
  Scheme scheme = Scheme::rk4;
  std::size_t steps = 0;     // accepted steps
  std::size_t rejected = 0;  // ck45 only
  std::size_t reaction_evaluations = 0;
  std::size_t forward_transforms = 0;
  std::size_t inverse_transforms = 0;
  std::size_t snapshots = 0;
  double wall_seconds = 0.0;
  std::vector<double> step_times;  // ck45: time at the start of each accepted step
  std::vector<double> step_sizes;  // ck45: accepted step sizes
  State final_state;
  std::optional<std::string> abort_reason;
  double abort_time = 0.0;
};

/// A step-level abort with the context of the run that hit it.
class IntegrationAbort : public NumericalAbort {
 public:
  IntegrationAbort(const std::string& what, double t, double max_abs, RunSummary partial)
      : NumericalAbort(what, t, max_abs), partial(std::move(partial)) {}
  RunSummary partial;
};

/// Throws std::invalid_argument for an inconsistent configuration.
void validate(const IntegrateOptions& options);

/// Advances the model's initial condition (or `initial` when given) from its
/// time to t_final. Fixed-step schemes shorten the last step to land on
/// t_final; ck45 also lands exactly on every snapshot time. Fixed-step
/// snapshots are taken at the first step at or past each cadence time.
/// Step-level aborts surface as IntegrationAbort.
RunSummary integrate(const ModelSpec& model, const GridSpec& grid,
                     const IntegrateOptions& options, const SnapshotSink& sink = {},
                     std::optional<State> initial = std::nullopt);

}  // namespace rdspec
