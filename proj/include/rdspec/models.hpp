#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rdspec/aligned.hpp"
#include "rdspec/grid.hpp"
#include "rdspec/state.hpp"

namespace rdspec {

/// Pointwise reaction. For single-species models v and rv are empty.
using Reaction = std::function<void(std::span<const double> u, std::span<const double> v,
                                    std::span<double> ru, std::span<double> rv)>;

using InitialCondition = std::function<std::vector<RealField>(const GridSpec&)>;

struct DefaultGrid {
  std::size_t n = 512;
  double half_length = 50.0;
  int dims = 1;
};

struct ModelSpec {
  std::string name;
  int species = 1;
  std::vector<double> diffusivity;
  std::map<std::string, double> params;
  Reaction reaction;
  InitialCondition initial;
  DefaultGrid default_grid;
  double default_dt = 0.1;
  std::string equations;
  std::string notes;

  GridSpec make_default_grid() const {
    return make_grid(default_grid.n, default_grid.half_length, default_grid.dims);
  }
};

/// Registered names: fisher1d, fisher2d, epidemic, gray1d, gray2d, auto, labyrinthe2d.
const std::vector<std::string>& model_names();

/// Builds a registry entry. Overrides must name known parameters; unknown
/// model or parameter names throw std::invalid_argument.
ModelSpec make_model(std::string_view name, const std::map<std::string, double>& overrides = {});

/// Human-readable registry entry: equations, parameters, defaults, sources.
std::string describe_model(std::string_view name);

/// Same physics with the reaction replaced by zero (pure diffusion).
ModelSpec without_reaction(ModelSpec model);

/// Evaluates the model's initial condition and its transform.
State initial_condition(const ModelSpec& model, const GridSpec& grid);

// Reaction terms, evaluated with the active SIMD backend.
void reaction_fisher(std::span<const double> u, std::span<double> ru);
void reaction_epidemic(std::span<const double> u, std::span<const double> v, double lambda,
                       std::span<double> ru, std::span<double> rv);
void reaction_gray(std::span<const double> u, std::span<const double> v, double A, double B,
                   std::span<double> ru, std::span<double> rv);
void reaction_auto(std::span<const double> u, std::span<const double> v, unsigned m,
                   std::span<double> ru, std::span<double> rv);
void reaction_labyrinthine(std::span<const double> u, std::span<const double> v, double a0,
                           double a1, double delta, std::span<double> ru, std::span<double> rv);

/// Gray-Scott rate constants A = eps * a, B = eps^(1/3) * b.
struct GrayRates {
  double A;
  double B;
};
GrayRates gray_rates(double a, double b, double eps);

/// Smallest real root of a1 u^3 + u (1 - a1) - a0 = 0 in [-10, 10], polished
/// to |residual| < 1e-12. Throws std::domain_error when no root is bracketed
/// or a1 == 0.
double cubic_root_u_minus(double a0, double a1);

}  // namespace rdspec
