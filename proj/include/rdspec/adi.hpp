#pragma once

#include <Eigen/Dense>
#include <Eigen/LU>

#include <cstddef>
#include <functional>

#include "rdspec/grid.hpp"
#include "rdspec/models.hpp"

namespace rdspec {

/// Dense second-derivative Fourier differentiation matrix on n periodic
/// points of [-L, L): inverse transform of -omega^2 times the forward
/// transform, applied to the identity columns.
struct DiffMatrix {
  std::size_t n = 0;
  double half_length = 0.0;
  Eigen::MatrixXd D;
};

DiffMatrix build_diff_matrix(std::size_t n, double half_length);

/// Alternating-direction implicit step with spectral differentiation
/// matrices, for single-species 2D models on square grids:
///
///   U_half = [I - h D]^-1 (U [I + h D^T] + h F(U))
///   U_next = ([I + h D] U_half + h F(U_half)) [I - h D^T]^-1,   h = dt/2.
///
/// The matrices are factorized once per dt; steps are products and solves.
class AdiStepper {
 public:
  AdiStepper(const ModelSpec& model, const GridSpec& grid);

  /// Rebuilds the factorization when dt changes.
  void prepare(double dt);
  /// Advances u (row-major, x fastest) by one step of the prepared dt.
  void step(RealField& u);

  double dt() const { return dt_; }
  double linear_algebra_seconds() const { return linalg_seconds_; }
  double reaction_seconds() const { return reaction_seconds_; }
  std::size_t reaction_evaluations() const { return reaction_evaluations_; }

 private:
  void reaction(const Eigen::MatrixXd& u, Eigen::MatrixXd& out);

  ModelSpec model_;
  std::size_t n_;
  DiffMatrix diff_;
  double dt_ = 0.0;
  Eigen::MatrixXd plus_;                   // I + h D
  Eigen::PartialPivLU<Eigen::MatrixXd> minus_lu_;  // I - h D
  RealField scratch_in_;
  RealField scratch_out_;
  double linalg_seconds_ = 0.0;
  double reaction_seconds_ = 0.0;
  std::size_t reaction_evaluations_ = 0;
};

/// One ADI step of size dt (factorizes for this dt).
RealField adi_step(const RealField& u, const ModelSpec& model, const GridSpec& grid, double dt);

struct AdiSummary {
  std::size_t steps = 0;
  std::size_t snapshots = 0;
  double wall_seconds = 0.0;
  double linear_algebra_seconds = 0.0;
  double reaction_seconds = 0.0;
  double t_final = 0.0;
  RealField final_field;
};

/// Fixed-step ADI run from the model's initial condition; the last step is
/// shortened to land on t_final. The sink receives (t, field).
AdiSummary adi_integrate(const ModelSpec& model, const GridSpec& grid, double dt, double t_final,
                         double snapshot_every = 0.0,
                         const std::function<void(double, const RealField&)>& sink = {});

}  // namespace rdspec
