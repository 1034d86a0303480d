#include "rdspec/exp_tables.hpp"

#include <cmath>
#include <stdexcept>

#include "rdspec/phi.hpp"

namespace rdspec {

LinearSymbol make_symbol(const GridSpec& grid, std::span<const double> diffusivity) {
  LinearSymbol sym;
  for (double d : diffusivity) {
    if (d < 0.0) throw std::invalid_argument("make_symbol: diffusivity must be >= 0");
    RealField L(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) L[k] = -d * grid.omega_sq[k];
    sym.per_species.push_back(std::move(L));
  }
  return sym;
}

ExpTables build_exp_tables(const LinearSymbol& symbol, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("build_exp_tables: dt must be positive");
  ExpTables tables;
  tables.dt = dt;
  for (const auto& L : symbol.per_species) {
    const std::size_t n = L.size();
    SpeciesExpTable t;
    for (auto* f : {&t.E, &t.E_half, &t.phi0, &t.phi1, &t.phi2, &t.phi0_half, &t.phi1_half,
                    &t.phi0_half_minus_2phi1_half, &t.phi0_minus_2phi1, &t.weight_first,
                    &t.weight_middle, &t.weight_last}) {
      f->resize(n);
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double z = L[k] * dt;
      const double zh = 0.5 * z;
      t.E[k] = std::exp(z);
      t.E_half[k] = std::exp(zh);
      const double p0 = phi(0, z);
      const double p1 = phi(1, z);
      const double p2 = phi(2, z);
      const double p0h = phi(0, zh);
      const double p1h = phi(1, zh);
      t.phi0[k] = p0;
      t.phi1[k] = p1;
      t.phi2[k] = p2;
      t.phi0_half[k] = p0h;
      t.phi1_half[k] = p1h;
      t.phi0_half_minus_2phi1_half[k] = p0h - 2.0 * p1h;
      t.phi0_minus_2phi1[k] = p0 - 2.0 * p1;
      t.weight_first[k] = 4.0 * p2 - 3.0 * p1 + p0;
      t.weight_middle[k] = p1 - 2.0 * p2;
      t.weight_last[k] = 4.0 * p2 - p1;
    }
    tables.species.push_back(std::move(t));
  }
  return tables;
}

}  // namespace rdspec
