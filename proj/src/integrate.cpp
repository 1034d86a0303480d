#include "rdspec/integrate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace rdspec {

void validate(const IntegrateOptions& o) {
  if (!(o.t_final >= 0.0) || !std::isfinite(o.t_final)) {
    throw std::invalid_argument("integrate: t_final must be finite and >= 0");
  }
  if (!(o.dt > 0.0) || !std::isfinite(o.dt)) {
    throw std::invalid_argument("integrate: dt must be positive");
  }
  if (!(o.snapshot_every >= 0.0)) {
    throw std::invalid_argument("integrate: snapshot cadence must be >= 0");
  }
  if (o.scheme == Scheme::ck45) {
    StepControl c = o.control;
    c.dt = std::clamp(o.dt, c.dt_min, c.dt_max);
    validate(c);
  }
}

namespace {

class SnapshotClock {
 public:
  SnapshotClock(double every, double t_final) : every_(every), t_final_(t_final) {}

  double next() const { return every_ > 0.0 ? every_ * static_cast<double>(count_) : t_final_; }

  bool due(double t, double tolerance) const {
    return every_ > 0.0 && t >= next() - tolerance;
  }
  void advance(double t, double tolerance) {
    while (every_ > 0.0 && next() <= t + tolerance) ++count_;
  }

 private:
  double every_;
  double t_final_;
  std::size_t count_ = 1;
};

}  // namespace

RunSummary integrate(const ModelSpec& model, const GridSpec& grid,
                     const IntegrateOptions& options, const SnapshotSink& sink,
                     std::optional<State> initial) {
  validate(options);
  const auto start = std::chrono::steady_clock::now();
  RunSummary summary;
  summary.scheme = options.scheme;

  SpectralSystem sys(model, grid, options.stepper);
  State state = initial ? std::move(*initial) : initial_condition(model, grid);
  const double t0 = state.t;
  const double t_final = options.t_final;

  auto emit = [&](const State& s) {
    if (sink) sink(s);
    ++summary.snapshots;
  };
  emit(state);

  SnapshotClock clock(options.snapshot_every, t_final);
  clock.advance(t0, 0.0);
  bool final_emitted = t_final <= t0;

  try {
    if (options.scheme == Scheme::ck45) {
      StepControl control = options.control;
      control.dt = std::clamp(options.dt, control.dt_min, control.dt_max);
      const double tiny = 1e-12 * std::max(1.0, std::fabs(t_final));
      while (state.t < t_final - tiny) {
        double target = t_final;
        if (options.snapshot_every > 0.0) target = std::min(target, clock.next());
        const double t_before = state.t;
        const auto r = if_ck45_step(sys, state, control, target - state.t);
        if (!r.accepted) continue;
        // Land exactly on the target when the step was clipped to it.
        if (std::fabs(state.t - target) <= tiny) state.t = target;
        summary.step_times.push_back(t_before);
        summary.step_sizes.push_back(r.dt_used);
        if (clock.due(state.t, tiny)) {
          emit(state);
          clock.advance(state.t, tiny);
          if (state.t >= t_final - tiny) final_emitted = true;
        }
      }
      summary.steps = control.accepted;
      summary.rejected = control.rejected;
    } else {
      const double dt = options.dt;
      const double tiny = 1e-9 * dt;
      std::size_t k = 0;
      while (state.t < t_final - tiny) {
        const double remaining = t_final - state.t;
        double h = dt;
        bool last = false;
        if (remaining <= dt + tiny) {
          h = remaining;
          last = true;
        }
        const ExpTables& tables = sys.tables(h);
        switch (options.scheme) {
          case Scheme::rk4:
            if_rk4_step(sys, state, tables, h);
            break;
          case Scheme::etdrk4:
            etdrk4_step(sys, state, tables, h);
            break;
          case Scheme::etdrk4b:
            etdrk4b_step(sys, state, tables, h);
            break;
          case Scheme::ck45:
            break;
        }
        ++k;
        state.t = last ? t_final : t0 + static_cast<double>(k) * dt;
        if (clock.due(state.t, tiny)) {
          emit(state);
          clock.advance(state.t, tiny);
          if (last) final_emitted = true;
        }
      }
      summary.steps = k;
    }
  } catch (const NumericalAbort& e) {
    summary.abort_reason = e.what();
    summary.abort_time = e.time;
    summary.final_state = std::move(state);
    summary.reaction_evaluations = sys.reaction_evaluations();
    summary.forward_transforms = sys.forward_transforms();
    summary.inverse_transforms = sys.inverse_transforms();
    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    throw IntegrationAbort(std::string(e.what()) + " [" + model.name + ", " +
                               std::string(scheme_name(options.scheme)) + "]",
                           e.time, e.max_abs, std::move(summary));
  }

  if (!final_emitted) emit(state);
  summary.reaction_evaluations = sys.reaction_evaluations();
  summary.forward_transforms = sys.forward_transforms();
  summary.inverse_transforms = sys.inverse_transforms();
  summary.final_state = std::move(state);
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

}  // namespace rdspec
