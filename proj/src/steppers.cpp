#include "rdspec/steppers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "rdspec/simd/kernels.hpp"

namespace rdspec {

namespace {

using simd::WeightedTerm;

constexpr std::array<std::string_view, 4> kSchemeNames = {"rk4", "ck45", "etdrk4", "etdrk4b"};

// Cash-Karp 4(5). Nodes are kept as multiples of 1/40 so every exponential
// factor e^{(a_i - a_j) z} is indexed by an integer.
constexpr int kStages = 6;
constexpr std::array<int, kStages> kNode40 = {0, 8, 12, 24, 40, 35};
constexpr double kB[kStages][kStages] = {
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5.0, 0, 0, 0, 0, 0},
    {3.0 / 40.0, 9.0 / 40.0, 0, 0, 0, 0},
    {3.0 / 10.0, -9.0 / 10.0, 6.0 / 5.0, 0, 0, 0},
    {-11.0 / 54.0, 5.0 / 2.0, -70.0 / 27.0, 35.0 / 27.0, 0, 0},
    {1631.0 / 55296.0, 175.0 / 512.0, 575.0 / 13824.0, 44275.0 / 110592.0, 253.0 / 4096.0, 0}};
constexpr std::array<double, kStages> kC5 = {37.0 / 378.0, 0.0, 250.0 / 621.0,
                                             125.0 / 594.0, 0.0, 512.0 / 1771.0};
constexpr std::array<double, kStages> kC4 = {2825.0 / 27648.0, 0.0,           18575.0 / 48384.0,
                                             13525.0 / 55296.0, 277.0 / 14336.0, 1.0 / 4.0};

void combine(ComplexField& out, std::initializer_list<WeightedTerm> terms) {
  simd::active().combine_modes(out.data(), terms.begin(), terms.size(), out.size());
}

void combine(ComplexField& out, const std::vector<WeightedTerm>& terms) {
  simd::active().combine_modes(out.data(), terms.data(), terms.size(), out.size());
}

}  // namespace

struct SpectralSystem::Workspace {
  // nl[i][s]: transformed reaction at stage i for species s
  std::array<std::vector<ComplexField>, kStages> nl;
  std::vector<ComplexField> stage;
  std::vector<ComplexField> stage2;
  std::vector<ComplexField> error;
  std::vector<RealField> error_phys;
  std::vector<RealField> candidate;

  double ck_dt = -1.0;
  std::map<int, std::vector<RealField>> ck_factors;
  bool ck_first_valid = false;
  double ck_first_t = 0.0;
  const void* ck_first_owner = nullptr;

  Workspace(int species, std::size_t size) {
    auto make = [&] { return std::vector<ComplexField>(species, ComplexField(size)); };
    for (auto& n : nl) n = make();
    stage = make();
    stage2 = make();
    error = make();
    error_phys.assign(species, RealField(size));
    candidate.assign(species, RealField(size));
  }
};

std::string_view scheme_name(Scheme s) { return kSchemeNames[static_cast<int>(s)]; }

Scheme parse_scheme(std::string_view name) {
  for (std::size_t i = 0; i < kSchemeNames.size(); ++i) {
    if (name == kSchemeNames[i]) return static_cast<Scheme>(i);
  }
  std::ostringstream msg;
  msg << "unknown scheme '" << name << "'; valid schemes:";
  for (auto n : kSchemeNames) msg << ' ' << n;
  throw std::invalid_argument(msg.str());
}

const std::vector<std::string>& scheme_names() {
  static const std::vector<std::string> names(kSchemeNames.begin(), kSchemeNames.end());
  return names;
}

void validate(const StepControl& c) {
  if (!(c.rel_tol > 0.0)) throw std::invalid_argument("step control: rel_tol must be positive");
  if (!(c.dt_min > 0.0) || !(c.dt_max >= c.dt_min)) {
    throw std::invalid_argument("step control: need 0 < dt_min <= dt_max");
  }
  if (!(c.dt >= c.dt_min && c.dt <= c.dt_max)) {
    throw std::invalid_argument("step control: dt outside [dt_min, dt_max]");
  }
  if (!(c.safety > 0.0 && c.safety <= 1.0)) {
    throw std::invalid_argument("step control: safety must lie in (0, 1]");
  }
  if (!(c.abs_floor > 0.0)) throw std::invalid_argument("step control: floor must be positive");
}

SpectralSystem::SpectralSystem(ModelSpec model, GridSpec grid, StepperOptions options)
    : model_(std::move(model)),
      grid_(std::move(grid)),
      options_(options),
      symbol_(make_symbol(grid_, model_.diffusivity)),
      transform_(grid_),
      phys_(model_.species, RealField(grid_.size())),
      rates_(2, RealField(grid_.size())),
      work_(std::make_unique<Workspace>(model_.species, grid_.size())) {
  if (static_cast<int>(model_.diffusivity.size()) != model_.species) {
    throw std::invalid_argument("model: one diffusivity per species required");
  }
  if (options_.dealias) {
    dealias_mask_.assign(grid_.size(), 1.0);
    auto index = [](std::size_t i, std::size_t n) {
      const long m = static_cast<long>(i);
      return std::abs(m > static_cast<long>(n / 2) ? m - static_cast<long>(n) : m);
    };
    for (std::size_t j = 0; j < grid_.ny(); ++j) {
      for (std::size_t i = 0; i < grid_.nx(); ++i) {
        const bool keep_x = index(i, grid_.nx()) <= static_cast<long>(grid_.nx() / 3);
        const bool keep_y =
            grid_.dims == 1 || index(j, grid_.ny()) <= static_cast<long>(grid_.ny() / 3);
        dealias_mask_[j * grid_.nx() + i] = (keep_x && keep_y) ? 1.0 : 0.0;
      }
    }
  }
}

SpectralSystem::~SpectralSystem() = default;

const std::vector<RealField>& SpectralSystem::last_error_field() const {
  return work_->error_phys;
}

const ExpTables& SpectralSystem::tables(double dt) {
  auto it = table_cache_.find(dt);
  if (it != table_cache_.end()) return it->second;
  // A run needs at most the main step and one shortened final step.
  if (table_cache_.size() >= 4) table_cache_.clear();
  return table_cache_.emplace(dt, build_exp_tables(symbol_, dt)).first->second;
}

void SpectralSystem::check_finite(const std::vector<RealField>& fields, double t) const {
  double worst = 0.0;
  for (const auto& f : fields) worst = std::max(worst, simd::active().max_abs(f.data(), f.size()));
  if (!(worst <= options_.blowup_threshold)) {
    std::ostringstream msg;
    msg << "numerical blow-up at t=" << t << ": max|u|=" << worst;
    throw NumericalAbort(msg.str(), t, worst);
  }
}

void SpectralSystem::nonlinear_physical(const std::vector<RealField>& fields,
                                        std::vector<ComplexField>& out, double t) {
  check_finite(fields, t);
  const std::span<const double> none;
  const std::span<double> none_out;
  if (model_.species == 1) {
    model_.reaction(fields[0], none, rates_[0], none_out);
  } else {
    model_.reaction(fields[0], fields[1], rates_[0], rates_[1]);
  }
  ++reaction_evaluations_;
  for (int s = 0; s < model_.species; ++s) {
    transform_.forward(rates_[s], out[s]);
    if (options_.dealias) {
      simd::active().scale_modes(out[s].data(), dealias_mask_.data(), out[s].data(),
                                 out[s].size());
    }
  }
}

void SpectralSystem::nonlinear(const std::vector<ComplexField>& stage,
                               std::vector<ComplexField>& out, double t) {
  for (int s = 0; s < model_.species; ++s) transform_.inverse_real(stage[s], phys_[s]);
  nonlinear_physical(phys_, out, t);
}

void SpectralSystem::synchronize(State& state) {
  for (int s = 0; s < model_.species; ++s) transform_.inverse_real(state.U[s], state.u[s]);
  check_finite(state.u, state.t);
}

void if_rk4_step(SpectralSystem& sys, State& state, const ExpTables& tables, double dt) {
  auto& w = sys.workspace();
  auto& n1 = w.nl[0];
  auto& n2 = w.nl[1];
  auto& n3 = w.nl[2];
  auto& n4 = w.nl[3];
  auto& y = w.stage;
  const int S = sys.species();
  const double t = state.t;

  sys.nonlinear_physical(state.u, n1, t);
  for (int s = 0; s < S; ++s) {
    const auto& tb = tables.species[s];
    combine(y[s], {{1.0, tb.E_half.data(), state.U[s].data()},
                   {0.5 * dt, tb.E_half.data(), n1[s].data()}});
  }
  sys.nonlinear(y, n2, t + 0.5 * dt);
  for (int s = 0; s < S; ++s) {
    const auto& tb = tables.species[s];
    combine(y[s], {{1.0, tb.E_half.data(), state.U[s].data()}, {0.5 * dt, nullptr, n2[s].data()}});
  }
  sys.nonlinear(y, n3, t + 0.5 * dt);
  for (int s = 0; s < S; ++s) {
    const auto& tb = tables.species[s];
    combine(y[s], {{1.0, tb.E.data(), state.U[s].data()}, {dt, tb.E_half.data(), n3[s].data()}});
  }
  sys.nonlinear(y, n4, t + dt);
  for (int s = 0; s < S; ++s) {
    const auto& tb = tables.species[s];
    combine(state.U[s], {{1.0, tb.E.data(), state.U[s].data()},
                         {dt / 6.0, tb.E.data(), n1[s].data()},
                         {dt / 3.0, tb.E_half.data(), n2[s].data()},
                         {dt / 3.0, tb.E_half.data(), n3[s].data()},
                         {dt / 6.0, nullptr, n4[s].data()}});
  }
  state.t = t + dt;
  sys.synchronize(state);
}

void etdrk4b_step(SpectralSystem& sys, State& state, const ExpTables& tables, double dt) {
  auto& w = sys.workspace();
  auto& n1 = w.nl[0];
  auto& n2 = w.nl[1];
  auto& n3 = w.nl[2];
  auto& n4 = w.nl[3];
  auto& y = w.stage;
  const int S = sys.species();
  const double t = state.t;

  sys.nonlinear_physical(state.u, n1, t);
  for (int s = 0; s < S; ++s) {
    const auto& tb = tables.species[s];
    combine(y[s], {{1.0, tb.E_half.data(), state.U[s].data()},
                   {0.5 * dt, tb.phi0_half.data(), n1[s].data()}});
  }
  sys.nonlinear(y, n2, t + 0.5 * dt);
  for (int s = 0; s < S; ++s) {
    const auto& tb = tables.species[s];
    combine(y[s], {{1.0, tb.E_half.data(), state.U[s].data()},
                   {0.5 * dt, tb.phi0_half_minus_2phi1_half.data(), n1[s].data()},
                   {dt, tb.phi1_half.data(), n2[s].data()}});
  }
  sys.nonlinear(y, n3, t + 0.5 * dt);
  for (int s = 0; s < S; ++s) {
    const auto& tb = tables.species[s];
    combine(y[s], {{1.0, tb.E.data(), state.U[s].data()},
                   {dt, tb.phi0_minus_2phi1.data(), n1[s].data()},
                   {2.0 * dt, tb.phi1.data(), n3[s].data()}});
  }
  sys.nonlinear(y, n4, t + dt);
  for (int s = 0; s < S; ++s) {
    const auto& tb = tables.species[s];
    combine(state.U[s], {{1.0, tb.E.data(), state.U[s].data()},
                         {dt, tb.weight_first.data(), n1[s].data()},
                         {2.0 * dt, tb.weight_middle.data(), n2[s].data()},
                         {2.0 * dt, tb.weight_middle.data(), n3[s].data()},
                         {dt, tb.weight_last.data(), n4[s].data()}});
  }
  state.t = t + dt;
  sys.synchronize(state);
}

void etdrk4_step(SpectralSystem& sys, State& state, const ExpTables& tables, double dt) {
  auto& w = sys.workspace();
  auto& n1 = w.nl[0];
  auto& n2 = w.nl[1];
  auto& n3 = w.nl[2];
  auto& n4 = w.nl[3];
  auto& a = w.stage;
  auto& y = w.stage2;
  const int S = sys.species();
  const double t = state.t;

  sys.nonlinear_physical(state.u, n1, t);
  for (int s = 0; s < S; ++s) {
    const auto& tb = tables.species[s];
    combine(a[s], {{1.0, tb.E_half.data(), state.U[s].data()},
                   {0.5 * dt, tb.phi0_half.data(), n1[s].data()}});
  }
  sys.nonlinear(a, n2, t + 0.5 * dt);
  for (int s = 0; s < S; ++s) {
    const auto& tb = tables.species[s];
    combine(y[s], {{1.0, tb.E_half.data(), state.U[s].data()},
                   {0.5 * dt, tb.phi0_half.data(), n2[s].data()}});
  }
  sys.nonlinear(y, n3, t + 0.5 * dt);
  for (int s = 0; s < S; ++s) {
    const auto& tb = tables.species[s];
    combine(y[s], {{1.0, tb.E_half.data(), a[s].data()},
                   {dt, tb.phi0_half.data(), n3[s].data()},
                   {-0.5 * dt, tb.phi0_half.data(), n1[s].data()}});
  }
  sys.nonlinear(y, n4, t + dt);
  for (int s = 0; s < S; ++s) {
    const auto& tb = tables.species[s];
    combine(state.U[s], {{1.0, tb.E.data(), state.U[s].data()},
                         {dt, tb.weight_first.data(), n1[s].data()},
                         {2.0 * dt, tb.weight_middle.data(), n2[s].data()},
                         {2.0 * dt, tb.weight_middle.data(), n3[s].data()},
                         {dt, tb.weight_last.data(), n4[s].data()}});
  }
  state.t = t + dt;
  sys.synchronize(state);
}

namespace {

// e^{(k/40) dt L_s} for every exponent multiple k the tableau uses.
void build_ck_factors(SpectralSystem& sys, double dt) {
  auto& w = sys.workspace();
  if (w.ck_dt == dt) return;
  w.ck_factors.clear();
  std::vector<int> needed;
  for (int i = 0; i < kStages; ++i) {
    needed.push_back(kNode40[i]);
    needed.push_back(40 - kNode40[i]);
    for (int j = 0; j < i; ++j) {
      if (kB[i][j] != 0.0) needed.push_back(kNode40[i] - kNode40[j]);
    }
  }
  for (int k : needed) {
    if (k == 0 || w.ck_factors.contains(k)) continue;
    std::vector<RealField> per_species;
    for (const auto& L : sys.symbol().per_species) {
      RealField f(L.size());
      const double scale = dt * static_cast<double>(k) / 40.0;
      for (std::size_t m = 0; m < L.size(); ++m) f[m] = std::exp(scale * L[m]);
      per_species.push_back(std::move(f));
    }
    w.ck_factors.emplace(k, std::move(per_species));
  }
  w.ck_dt = dt;
}

const double* ck_factor(SpectralSystem& sys, int k, int s) {
  if (k == 0) return nullptr;
  return sys.workspace().ck_factors.at(k)[s].data();
}

}  // namespace

Ck45Result if_ck45_step(SpectralSystem& sys, State& state, StepControl& control, double max_dt) {
  validate(control);
  auto& w = sys.workspace();
  const int S = sys.species();
  const double t = state.t;
  const double proposal = control.dt;
  const double h = std::min(control.dt, max_dt);
  if (!(h > 0.0)) throw std::invalid_argument("if_ck45_step: step must be positive");
  build_ck_factors(sys, h);

  // The first stage depends only on the state, so a retry after a rejection reuses it.
  if (!(w.ck_first_valid && w.ck_first_t == t && w.ck_first_owner == state.U[0].data())) {
    sys.nonlinear_physical(state.u, w.nl[0], t);
    w.ck_first_valid = true;
    w.ck_first_t = t;
    w.ck_first_owner = state.U[0].data();
  }

  std::vector<WeightedTerm> terms;
  // A stage that overflows means the trial step is far too large: reject it.
  bool stage_overflow = false;
  for (int i = 1; i < kStages && !stage_overflow; ++i) {
    for (int s = 0; s < S; ++s) {
      terms.clear();
      terms.push_back({1.0, ck_factor(sys, kNode40[i], s), state.U[s].data()});
      for (int j = 0; j < i; ++j) {
        if (kB[i][j] == 0.0) continue;
        terms.push_back({h * kB[i][j], ck_factor(sys, kNode40[i] - kNode40[j], s),
                         w.nl[j][s].data()});
      }
      combine(w.stage[s], terms);
    }
    try {
      sys.nonlinear(w.stage, w.nl[i], t + h * kNode40[i] / 40.0);
    } catch (const NumericalAbort&) {
      stage_overflow = true;
    }
  }

  // Fifth-order solution into stage, embedded difference into error.
  for (int s = 0; s < S && !stage_overflow; ++s) {
    terms.clear();
    terms.push_back({1.0, ck_factor(sys, 40, s), state.U[s].data()});
    for (int i = 0; i < kStages; ++i) {
      if (kC5[i] == 0.0) continue;
      terms.push_back({h * kC5[i], ck_factor(sys, 40 - kNode40[i], s), w.nl[i][s].data()});
    }
    combine(w.stage[s], terms);

    terms.clear();
    for (int i = 0; i < kStages; ++i) {
      terms.push_back(
          {h * (kC5[i] - kC4[i]), ck_factor(sys, 40 - kNode40[i], s), w.nl[i][s].data()});
    }
    combine(w.error[s], terms);
  }

  auto& err_phys = w.error_phys;
  auto& candidate = w.candidate;
  double scaled = stage_overflow ? std::numeric_limits<double>::infinity() : 0.0;
  double estimate = scaled;
  for (int s = 0; s < S && !stage_overflow; ++s) {
    sys.transform().inverse_real(w.stage[s], candidate[s]);
    sys.transform().inverse_real(w.error[s], err_phys[s]);
    const auto& k = simd::active();
    scaled = std::max(scaled, k.max_scaled_error(err_phys[s].data(), candidate[s].data(),
                                                 control.rel_tol, control.abs_floor,
                                                 candidate[s].size()));
    estimate = std::max(estimate, k.max_abs(err_phys[s].data(), err_phys[s].size()));
  }

  Ck45Result result;
  result.dt_used = h;
  result.scaled_error = scaled;
  result.error_estimate = estimate;
  result.accepted = scaled <= 1.0;

  double next;
  if (result.accepted) {
    next = scaled > 0.0 ? control.safety * h * std::pow(scaled, -0.2) : control.dt_max;
  } else {
    next = std::isfinite(scaled) ? control.safety * h * std::pow(scaled, -0.25)
                                 : 0.1 * h;
  }
  next = std::clamp(next, control.dt_min, control.dt_max);

  if (result.accepted) {
    sys.check_finite(candidate, t + h);
    for (int s = 0; s < S; ++s) {
      std::swap(state.U[s], w.stage[s]);
      std::swap(state.u[s], candidate[s]);
    }
    state.t = t + h;
    w.ck_first_valid = false;
    ++control.accepted;
    // A step shortened to hit an output time says little about the natural step.
    if (h < proposal) next = std::max(next, proposal);
  } else {
    ++control.rejected;
    if (h <= control.dt_min) {
      std::ostringstream msg;
      msg << "ck45: step rejected at dt_min=" << control.dt_min << " (t=" << t
          << ", scaled error " << scaled << ")";
      throw NumericalAbort(msg.str(), t, estimate);
    }
  }
  control.dt = next;
  result.next_dt = next;
  return result;
}

}  // namespace rdspec
