#include "rdspec/adi.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "rdspec/steppers.hpp"
#include "rdspec/transform.hpp"

namespace rdspec {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

DiffMatrix build_diff_matrix(std::size_t n, double half_length) {
  const GridSpec line = make_grid(n, half_length, 1);
  SpectralTransform tf(line);
  DiffMatrix dm;
  dm.n = n;
  dm.half_length = half_length;
  dm.D.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  RealField column(n, 0.0);
  RealField image(n);
  ComplexField spectral(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(column.begin(), column.end(), 0.0);
    column[j] = 1.0;
    tf.forward(column, spectral);
    for (std::size_t k = 0; k < n; ++k) spectral[k] *= -line.omega_sq[k];
    tf.inverse_real(spectral, image);
    for (std::size_t i = 0; i < n; ++i) {
      dm.D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = image[i];
    }
  }
  return dm;
}

AdiStepper::AdiStepper(const ModelSpec& model, const GridSpec& grid)
    : model_(model), n_(grid.nx()) {
  if (model.species != 1) throw std::invalid_argument("adi: single-species models only");
  if (grid.dims != 2) throw std::invalid_argument("adi: 2D grids only");
  if (grid.nx() != grid.ny() || grid.half_length[0] != grid.half_length[1]) {
    throw std::invalid_argument("adi: square grids only");
  }
  diff_ = build_diff_matrix(n_, grid.half_length[0]);
  scratch_in_.resize(n_ * n_);
  scratch_out_.resize(n_ * n_);
}

void AdiStepper::prepare(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("adi: dt must be positive");
  if (dt == dt_) return;
  const auto t0 = std::chrono::steady_clock::now();
  const double h = 0.5 * dt;
  const auto N = static_cast<Eigen::Index>(n_);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);
  plus_ = I + h * diff_.D;
  minus_lu_.compute(I - h * diff_.D);
  // D has eigenvalues <= 0, so I - hD has eigenvalues >= 1.
  const double det = minus_lu_.determinant();
  if (!(std::isfinite(det) && det != 0.0)) {
    throw std::runtime_error("adi: singular implicit operator");
  }
  dt_ = dt;
  linalg_seconds_ += seconds_since(t0);
}

void AdiStepper::reaction(const Eigen::MatrixXd& u, Eigen::MatrixXd& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t count = n_ * n_;
  // Pointwise, so storage order is irrelevant.
  std::copy(u.data(), u.data() + count, scratch_in_.begin());
  model_.reaction(scratch_in_, {}, scratch_out_, {});
  out.resize(u.rows(), u.cols());
  std::copy(scratch_out_.begin(), scratch_out_.end(), out.data());
  ++reaction_evaluations_;
  reaction_seconds_ += seconds_since(t0);
}

void AdiStepper::step(RealField& u) {
  if (dt_ <= 0.0) throw std::logic_error("adi: prepare() before step()");
  if (u.size() != n_ * n_) throw std::invalid_argument("adi: field shape mismatch");
  const double h = 0.5 * dt_;
  const auto N = static_cast<Eigen::Index>(n_);
  Eigen::Map<RowMajor> U(u.data(), N, N);
  Eigen::MatrixXd current = U;
  Eigen::MatrixXd f;

  reaction(current, f);
  auto t0 = std::chrono::steady_clock::now();
  Eigen::MatrixXd rhs = current * plus_.transpose() + h * f;
  Eigen::MatrixXd half = minus_lu_.solve(rhs);
  linalg_seconds_ += seconds_since(t0);

  reaction(half, f);
  t0 = std::chrono::steady_clock::now();
  rhs = plus_ * half + h * f;
  // X (I - h D)^T = rhs  <=>  (I - h D) X^T = rhs^T
  Eigen::MatrixXd next = minus_lu_.solve(rhs.transpose()).transpose();
  linalg_seconds_ += seconds_since(t0);
  U = next;
}

RealField adi_step(const RealField& u, const ModelSpec& model, const GridSpec& grid, double dt) {
  AdiStepper stepper(model, grid);
  stepper.prepare(dt);
  RealField out = u;
  stepper.step(out);
  return out;
}

AdiSummary adi_integrate(const ModelSpec& model, const GridSpec& grid, double dt, double t_final,
                         double snapshot_every,
                         const std::function<void(double, const RealField&)>& sink) {
  if (!(dt > 0.0)) throw std::invalid_argument("adi: dt must be positive");
  if (!(t_final >= 0.0)) throw std::invalid_argument("adi: t_final must be >= 0");
  const auto start = std::chrono::steady_clock::now();
  AdiSummary summary;
  AdiStepper stepper(model, grid);
  RealField u = model.initial(grid).at(0);
  if (sink) sink(0.0, u);
  ++summary.snapshots;

  const double tiny = 1e-9 * dt;
  double t = 0.0;
  std::size_t k = 0;
  std::size_t next_snap = 1;
  bool final_emitted = t_final <= tiny;
  while (t < t_final - tiny) {
    const double remaining = t_final - t;
    const bool last = remaining <= dt + tiny;
    stepper.prepare(last ? remaining : dt);
    stepper.step(u);
    ++k;
    t = last ? t_final : static_cast<double>(k) * dt;
    for (double x : u) {
      if (!std::isfinite(x)) {
        throw NumericalAbort("adi: non-finite value at t=" + std::to_string(t), t, x);
      }
    }
    if (snapshot_every > 0.0 && t >= snapshot_every * static_cast<double>(next_snap) - tiny) {
      if (sink) sink(t, u);
      ++summary.snapshots;
      while (snapshot_every * static_cast<double>(next_snap) <= t + tiny) ++next_snap;
      if (last) final_emitted = true;
    }
  }
  if (!final_emitted) {
    if (sink) sink(t, u);
    ++summary.snapshots;
  }
  summary.steps = k;
  summary.t_final = t;
  summary.final_field = std::move(u);
  summary.linear_algebra_seconds = stepper.linear_algebra_seconds();
  summary.reaction_seconds = stepper.reaction_seconds();
  summary.wall_seconds = seconds_since(start);
  return summary;
}

}  // namespace rdspec
