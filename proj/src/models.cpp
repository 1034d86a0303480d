#include "rdspec/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rdspec/simd/kernels.hpp"
#include "rdspec/transform.hpp"

namespace rdspec {

void reaction_fisher(std::span<const double> u, std::span<double> ru) {
  simd::active().fisher(u.data(), ru.data(), u.size());
}

void reaction_epidemic(std::span<const double> u, std::span<const double> v, double lambda,
                       std::span<double> ru, std::span<double> rv) {
  simd::active().epidemic(u.data(), v.data(), lambda, ru.data(), rv.data(), u.size());
}

void reaction_gray(std::span<const double> u, std::span<const double> v, double A, double B,
                   std::span<double> ru, std::span<double> rv) {
  simd::active().gray_scott(u.data(), v.data(), A, B, ru.data(), rv.data(), u.size());
}

void reaction_auto(std::span<const double> u, std::span<const double> v, unsigned m,
                   std::span<double> ru, std::span<double> rv) {
  simd::active().autocatalysis(u.data(), v.data(), m, ru.data(), rv.data(), u.size());
}

void reaction_labyrinthine(std::span<const double> u, std::span<const double> v, double a0,
                           double a1, double delta, std::span<double> ru,
                           std::span<double> rv) {
  simd::active().labyrinthine(u.data(), v.data(), a0, a1, delta, ru.data(), rv.data(),
                              u.size());
}

GrayRates gray_rates(double a, double b, double eps) {
  return {eps * a, std::cbrt(eps) * b};
}

double cubic_root_u_minus(double a0, double a1) {
  if (a1 == 0.0) throw std::domain_error("cubic_root_u_minus: a1 must be nonzero");
  const auto p = [&](double u) { return a1 * u * u * u + u * (1.0 - a1) - a0; };

  // Scan upward so the first sign change brackets the smallest root.
  constexpr int kCells = 4000;
  constexpr double kLo = -10.0;
  constexpr double kHi = 10.0;
  const double h = (kHi - kLo) / kCells;
  double lo = kLo;
  double plo = p(lo);
  for (int i = 1; i <= kCells; ++i) {
    const double hi = kLo + i * h;
    const double phi = p(hi);
    if (plo == 0.0) return lo;
    if ((plo < 0.0) != (phi < 0.0) || phi == 0.0) {
      double a = lo;
      double b = hi;
      double pa = plo;
      for (int it = 0; it < 200 && b - a > 0.0; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double pm = p(mid);
        if (pm == 0.0) return mid;
        if ((pa < 0.0) == (pm < 0.0)) {
          a = mid;
          pa = pm;
        } else {
          b = mid;
        }
      }
      double u = 0.5 * (a + b);
      // Newton polish inside the bracket.
      for (int it = 0; it < 4; ++it) {
        const double dp = 3.0 * a1 * u * u + (1.0 - a1);
        if (dp == 0.0) break;
        const double next = u - p(u) / dp;
        if (next < lo || next > hi) break;
        u = next;
      }
      if (std::fabs(p(u)) >= 1e-12) {
        throw std::domain_error("cubic_root_u_minus: residual tolerance not reached");
      }
      return u;
    }
    lo = hi;
    plo = phi;
  }
  throw std::domain_error("cubic_root_u_minus: no real root bracketed in [-10, 10]");
}

namespace {

double param(const std::map<std::string, double>& params, const std::string& key) {
  return params.at(key);
}

std::vector<RealField> fill_1d(const GridSpec& g, int species,
                               const std::function<void(double, double*)>& f) {
  std::vector<RealField> out(species, RealField(g.size()));
  double vals[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < g.nx(); ++i) {
    f(g.coords[0][i], vals);
    for (int s = 0; s < species; ++s) out[s][i] = vals[s];
  }
  return out;
}

std::vector<RealField> fill_2d(const GridSpec& g, int species,
                               const std::function<void(double, double, double*)>& f) {
  std::vector<RealField> out(species, RealField(g.size()));
  double vals[2] = {0.0, 0.0};
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      f(g.coords[0][i], g.coords[1][j], vals);
      for (int s = 0; s < species; ++s) out[s][j * g.nx() + i] = vals[s];
    }
  }
  return out;
}

void require_dims(const GridSpec& g, int dims, const std::string& model) {
  if (g.dims != dims) {
    throw std::invalid_argument(model + ": initial condition needs a " + std::to_string(dims) +
                                "D grid");
  }
}

Reaction fisher_reaction() {
  return [](std::span<const double> u, std::span<const double>, std::span<double> ru,
            std::span<double>) { reaction_fisher(u, ru); };
}

ModelSpec build_fisher1d(const std::map<std::string, double>& p) {
  ModelSpec m;
  m.name = "fisher1d";
  m.species = 1;
  m.diffusivity = {1.0};
  m.params = p;
  m.reaction = fisher_reaction();
  const double delta = param(p, "delta");
  m.initial = [delta](const GridSpec& g) {
    require_dims(g, 1, "fisher1d");
    return fill_1d(g, 1, [delta](double x, double* out) {
      out[0] = 1.0 / (2.0 * std::cosh(delta * x));
    });
  };
  m.default_grid = {512, 150.0, 1};
  m.equations = "u_t = u_xx + u(1 - u);  u(x,0) = 1 / (2 cosh(delta x))";
  m.notes = "front speed c = 2 for delta >= 1, c = delta + 1/delta otherwise";
  return m;
}

ModelSpec build_fisher2d(const std::map<std::string, double>& p) {
  ModelSpec m;
  m.name = "fisher2d";
  m.species = 1;
  m.diffusivity = {1.0};
  m.params = p;
  m.reaction = fisher_reaction();
  const double amp = param(p, "amplitude");
  const double width = param(p, "width");
  m.initial = [amp, width](const GridSpec& g) {
    require_dims(g, 2, "fisher2d");
    return fill_2d(g, 1, [amp, width](double x, double y, double* out) {
      out[0] = amp * std::exp(-width * (x * x + y * y));
    });
  };
  m.default_grid = {256, 25.0, 2};
  m.equations = "u_t = u_xx + u_yy + u(1 - u);  u(x,y,0) = 0.2 exp(-0.25 (x^2 + y^2))";
  m.notes = "benchmark for the ADI comparison scheme";
  return m;
}

ModelSpec build_epidemic(const std::map<std::string, double>& p) {
  ModelSpec m;
  m.name = "epidemic";
  m.species = 2;
  const double lambda = param(p, "lambda");
  const double eps = param(p, "eps");
  const double v0 = param(p, "v0");
  m.diffusivity = {1.0, eps};
  m.params = p;
  m.reaction = [lambda](std::span<const double> u, std::span<const double> v,
                        std::span<double> ru, std::span<double> rv) {
    reaction_epidemic(u, v, lambda, ru, rv);
  };
  m.initial = [v0](const GridSpec& g) {
    require_dims(g, 1, "epidemic");
    return fill_1d(g, 2, [v0](double x, double* out) {
      out[0] = 1.0 / (2.0 * std::cosh(x));
      out[1] = v0;
    });
  };
  m.default_grid = {512, 100.0, 1};
  m.equations = "u_t = u_xx + u(v - lambda),  v_t = eps v_xx - uv";
  m.notes =
      "u infectives, v susceptibles; lambda = 1, eps = 1, v0 = 2 are demonstration values. "
      "IC: u = 1/(2 cosh x), v = v0";
  return m;
}

Reaction gray_reaction(double A, double B) {
  return [A, B](std::span<const double> u, std::span<const double> v, std::span<double> ru,
                std::span<double> rv) { reaction_gray(u, v, A, B, ru, rv); };
}

ModelSpec build_gray1d(const std::map<std::string, double>& p) {
  ModelSpec m;
  m.name = "gray1d";
  m.species = 2;
  const double eps = param(p, "eps");
  const auto rates = gray_rates(param(p, "a"), param(p, "b"), eps);
  m.diffusivity = {1.0, eps};
  m.params = p;
  m.reaction = gray_reaction(rates.A, rates.B);
  m.initial = [](const GridSpec& g) {
    require_dims(g, 1, "gray1d");
    const double L = g.half_length[0];
    return fill_1d(g, 2, [L](double x, double* out) {
      const double s = std::pow(std::sin(std::numbers::pi * (x - L) / (2.0 * L)), 100.0);
      out[0] = 1.0 - 0.5 * s;
      out[1] = 0.25 * s;
    });
  };
  m.default_grid = {512, 50.0, 1};
  m.equations = "u_t = u_xx - uv^2 + A(1 - u),  v_t = eps v_xx + uv^2 - Bv;  A = eps a, B = eps^(1/3) b";
  m.notes = "v activator, u inhibitor. IC: u = 1 - sin^100(pi(x-L)/2L)/2, v = sin^100(pi(x-L)/2L)/4";
  return m;
}

ModelSpec build_gray2d(const std::map<std::string, double>& p) {
  ModelSpec m;
  m.name = "gray2d";
  m.species = 2;
  const double eps = param(p, "eps");
  const auto rates = gray_rates(param(p, "a"), param(p, "b"), eps);
  const bool asymmetric = param(p, "asymmetric") != 0.0;
  m.diffusivity = {1.0, eps};
  m.params = p;
  m.reaction = gray_reaction(rates.A, rates.B);
  m.initial = [asymmetric](const GridSpec& g) {
    require_dims(g, 2, "gray2d");
    const double xw = asymmetric ? 0.5 : 1.0;
    return fill_2d(g, 2, [xw](double x, double y, double* out) {
      const double e = std::exp(-(xw * x * x + y * y) / 20.0);
      out[0] = 1.0 - 0.5 * e;
      out[1] = 0.25 * e;
    });
  };
  m.default_grid = {256, 20.0, 2};
  m.equations =
      "u_t = lap(u) - uv^2 + A(1 - u),  v_t = eps lap(v) + uv^2 - Bv;  A = eps a, B = eps^(1/3) b";
  m.notes =
      "IC: u = 1 - exp(-r^2/20)/2, v = exp(-r^2/20)/4 with r^2 = x^2 + y^2, or x^2/2 + y^2 "
      "when asymmetric = 1";
  return m;
}

ModelSpec build_auto(const std::map<std::string, double>& p) {
  ModelSpec m;
  m.name = "auto";
  m.species = 2;
  const double eps = param(p, "eps");
  const double mexp = param(p, "m");
  if (mexp < 1.0 || mexp != std::floor(mexp) || mexp > 64.0) {
    throw std::invalid_argument("auto: m must be an integer in [1, 64]");
  }
  const auto power = static_cast<unsigned>(mexp);
  m.diffusivity = {1.0, eps};
  m.params = p;
  m.reaction = [power](std::span<const double> u, std::span<const double> v,
                       std::span<double> ru, std::span<double> rv) {
    reaction_auto(u, v, power, ru, rv);
  };
  m.initial = [](const GridSpec& g) {
    require_dims(g, 1, "auto");
    return fill_1d(g, 2, [](double x, double* out) {
      const double t = 1.0 + std::tanh(10.0 * (10.0 - std::fabs(x)));
      out[0] = 0.5 * t;
      out[1] = 1.0 - 0.25 * t;
    });
  };
  m.default_grid = {512, 50.0, 1};
  m.default_dt = power >= 10 ? 0.02 : 0.1;
  m.equations = "u_t = u_xx + v F(u),  v_t = eps v_xx - v F(u);  F(u) = u^m for u >= 0, else 0";
  m.notes = "eps is the inverse Lewis number. IC: u = (1 + tanh(10(10 - |x|)))/2, v = 1 - u/2";
  return m;
}

ModelSpec build_labyrinthe2d(const std::map<std::string, double>& p) {
  ModelSpec m;
  m.name = "labyrinthe2d";
  m.species = 2;
  const double a0 = param(p, "a0");
  const double a1 = param(p, "a1");
  const double eps = param(p, "eps");
  const double delta = param(p, "delta");
  const double yscale = param(p, "y_scale");
  m.diffusivity = {1.0, eps};
  m.params = p;
  m.reaction = [a0, a1, delta](std::span<const double> u, std::span<const double> v,
                               std::span<double> ru, std::span<double> rv) {
    reaction_labyrinthine(u, v, a0, a1, delta, ru, rv);
  };
  m.initial = [a0, a1, yscale](const GridSpec& g) {
    require_dims(g, 2, "labyrinthe2d");
    const double u_minus = cubic_root_u_minus(a0, a1);
    const double v_minus = (u_minus - a0) / a1;
    return fill_2d(g, 2, [=](double x, double y, double* out) {
      const double e = std::exp(-0.1 * (x * x + yscale * y * y));
      out[0] = a1 * v_minus + a0 - 4.0 * a1 * v_minus * e;
      out[1] = v_minus - 2.0 * v_minus * e;
    });
  };
  m.default_grid = {128, 100.0, 2};
  m.equations = "u_t = u - u^3 - v + lap(u),  v_t = delta(u - a1 v - a0) + eps lap(v)";
  m.notes =
      "IC: elliptical mound around the stable state (u-, v-), u- the smallest real root of "
      "a1 u^3 + u(1 - a1) - a0 = 0, v- = (u- - a0)/a1. With the defaults the mound relaxes "
      "back to (u-, v-); eps=4 delta=0.05 (slow, fast-diffusing inhibitor) grows labyrinths";
  return m;
}

struct RegistryEntry {
  const char* name;
  std::map<std::string, double> defaults;
  ModelSpec (*build)(const std::map<std::string, double>&);
};

const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries = {
      {"fisher1d", {{"delta", 1.0}}, build_fisher1d},
      {"fisher2d", {{"amplitude", 0.2}, {"width", 0.25}}, build_fisher2d},
      {"epidemic", {{"lambda", 1.0}, {"eps", 1.0}, {"v0", 2.0}}, build_epidemic},
      {"gray1d", {{"a", 9.0}, {"b", 0.4}, {"eps", 0.01}}, build_gray1d},
      {"gray2d", {{"a", 9.0}, {"b", 0.4}, {"eps", 0.01}, {"asymmetric", 0.0}}, build_gray2d},
      {"auto", {{"m", 9.0}, {"eps", 0.1}}, build_auto},
      {"labyrinthe2d",
       {{"a0", -0.1}, {"a1", 2.0}, {"eps", 0.05}, {"delta", 4.0}, {"y_scale", 0.01}},
       build_labyrinthe2d},
  };
  return entries;
}

const RegistryEntry& find_entry(std::string_view name) {
  for (const auto& e : registry()) {
    if (name == e.name) return e;
  }
  std::ostringstream msg;
  msg << "unknown model '" << name << "'; valid models:";
  for (const auto& e : registry()) msg << ' ' << e.name;
  throw std::invalid_argument(msg.str());
}

}  // namespace

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.emplace_back(e.name);
    return out;
  }();
  return names;
}

ModelSpec make_model(std::string_view name, const std::map<std::string, double>& overrides) {
  const auto& entry = find_entry(name);
  auto params = entry.defaults;
  for (const auto& [key, value] : overrides) {
    if (!params.contains(key)) {
      std::ostringstream msg;
      msg << "model " << entry.name << ": unknown parameter '" << key << "'; valid:";
      for (const auto& [k, _] : params) msg << ' ' << k;
      throw std::invalid_argument(msg.str());
    }
    params[key] = value;
  }
  if (params.contains("eps") && !(params["eps"] > 0.0)) {
    throw std::invalid_argument(std::string("model ") + entry.name + ": eps must be positive");
  }
  return entry.build(params);
}

std::string describe_model(std::string_view name) {
  const ModelSpec m = make_model(name);
  std::ostringstream out;
  out << m.name << " (" << m.default_grid.dims << "D, " << m.species
      << " species)\n";
  out << "  equations:   " << m.equations << '\n';
  out << "  parameters: ";
  for (const auto& [k, v] : m.params) out << ' ' << k << '=' << v;
  out << '\n';
  out << "  diffusivity:";
  for (double d : m.diffusivity) out << ' ' << d;
  out << '\n';
  out << "  default grid: n=" << m.default_grid.n << " L=" << m.default_grid.half_length
      << " dt=" << m.default_dt << '\n';
  out << "  notes:       " << m.notes << '\n';
  return out.str();
}

ModelSpec without_reaction(ModelSpec model) {
  model.reaction = [](std::span<const double>, std::span<const double>, std::span<double> ru,
                      std::span<double> rv) {
    std::fill(ru.begin(), ru.end(), 0.0);
    std::fill(rv.begin(), rv.end(), 0.0);
  };
  return model;
}

State initial_condition(const ModelSpec& model, const GridSpec& grid) {
  State s;
  s.t = 0.0;
  s.u = model.initial(grid);
  SpectralTransform tf(grid);
  s.U.resize(s.u.size());
  for (std::size_t k = 0; k < s.u.size(); ++k) {
    s.U[k].resize(grid.size());
    tf.forward(s.u[k], s.U[k]);
  }
  return s;
}

}  // namespace rdspec
