#pragma once

#include <span>
#include <vector>

#include "rdspec/aligned.hpp"
#include "rdspec/grid.hpp"

namespace rdspec {

/// Diagonal diffusion operator -d_s * omega_sq for each species.
struct LinearSymbol {
  std::vector<RealField> per_species;
};

LinearSymbol make_symbol(const GridSpec& grid, std::span<const double> diffusivity);

/// Per-mode exponentials and phi values for one species and one step size,
/// plus the stage weights the exponential integrators combine them into.
struct SpeciesExpTable {
  RealField E;          // e^{z}, z = L dt
  RealField E_half;     // e^{z/2}
  RealField phi0, phi1, phi2;
  RealField phi0_half, phi1_half;

  RealField phi0_half_minus_2phi1_half;  // phi0(z/2) - 2 phi1(z/2)
  RealField phi0_minus_2phi1;            // phi0 - 2 phi1
  RealField weight_first;                // 4 phi2 - 3 phi1 + phi0
  RealField weight_middle;               // phi1 - 2 phi2
  RealField weight_last;                 // 4 phi2 - phi1
};

struct ExpTables {
  double dt = 0.0;
  std::vector<SpeciesExpTable> species;
};

/// Throws std::invalid_argument unless dt > 0.
ExpTables build_exp_tables(const LinearSymbol& symbol, double dt);

}  // namespace rdspec
