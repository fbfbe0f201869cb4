#include "landau/config.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

#include "landau/degiorgi.hpp"
#include "landau/functionals.hpp"
#include "landau/toml_lite.hpp"

namespace landau {
namespace {

using nlohmann::json;

constexpr std::pair<Experiment, const char*> kNames[] = {
    {Experiment::lp_decay, "lp_decay"},
    {Experiment::linf_decay, "linf_decay"},
    {Experiment::heat_comparison, "heat_comparison"},
    {Experiment::moments, "moments"},
    {Experiment::inequalities, "inequalities"},
    {Experiment::degiorgi, "degiorgi"},
    {Experiment::kernel_validate, "kernel_validate"},
    {Experiment::rates, "rates"},
    {Experiment::all, "all"},
};

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

Point3 point(const json& j) {
  if (j.is_number()) {
    const double v = j.get<double>();
    return {v, v, v};
  }
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 3) throw ConfigError("points need three coordinates");
  return {v[0], v[1], v[2]};
}

preset::Gaussian gaussian_from_json(const json& j) {
  preset::Gaussian g;
  read(j, "mass", g.mass);
  read(j, "sigma", g.sigma);
  if (j.contains("center")) g.center = point(j.at("center"));
  return g;
}

json gaussian_to_json(const preset::Gaussian& g) {
  return {{"mass", g.mass}, {"sigma", g.sigma}, {"center", g.center}};
}

Mode mode_from_string(const std::string& s) {
  if (s == "landau_diffusion" || s == "landau") return Mode::landau_diffusion;
  if (s == "heat_baseline" || s == "heat") return Mode::heat_baseline;
  throw ConfigError("unknown mode '" + s + "'");
}

void solver_from_json(const json& j, SolverConfig& c, ExperimentConfig& e) {
  read(j, "n", c.n);
  read(j, "L", c.L);
  read(j, "T", c.T);
  read(j, "cfl", c.cfl);
  read(j, "refresh_every", c.refresh_every);
  read(j, "c_d", c.c_d);
  read(j, "p_list", c.p_list);
  read(j, "m_list", c.m_list);
  read(j, "negativity_tol", c.negativity_tol);
  read(j, "dt_max", c.dt_max);
  read(j, "poincare_p", c.poincare_p);
  if (j.contains("mode")) c.mode = mode_from_string(j.at("mode").get<std::string>());
  if (j.contains("cross_stencil")) {
    const auto s = j.at("cross_stencil").get<std::string>();
    if (s == "limited")
      c.cross_stencil = CrossStencil::limited;
    else if (s == "average")
      c.cross_stencil = CrossStencil::average;
    else
      throw ConfigError("unknown cross_stencil '" + s + "'");
  }
  if (j.contains("initial")) c.initial = preset_from_json(j.at("initial"));
  if (j.contains("snapshot_dir")) c.snapshot_dir = j.at("snapshot_dir").get<std::string>();
  read(j, "sample_times", c.sample_times);
  read(j, "sample_first", e.sample_first);
  read(j, "per_decade", e.per_decade);
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [k, v] : kNames)
    if (k == e) return v;
  return "unknown";
}

Experiment experiment_from_string(const std::string& name) {
  if (name.empty()) throw ConfigError("experiment name is empty");
  for (const auto& [k, v] : kNames)
    if (name == v) return k;
  throw ConfigError("unknown experiment '" + name + "'");
}

Preset preset_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError("initial data needs a 'type'");
  const auto type = j.at("type").get<std::string>();
  if (type == "gaussian") return gaussian_from_json(j);
  if (type == "spike") {
    preset::Spike s;
    read(j, "mass", s.mass);
    read(j, "width_cells", s.width_cells);
    return s;
  }
  if (type == "two_bumps") {
    if (!j.contains("first") || !j.contains("second")) throw ConfigError("two_bumps needs 'first' and 'second'");
    return preset::TwoBumps{gaussian_from_json(j.at("first")), gaussian_from_json(j.at("second"))};
  }
  if (type == "anisotropic_gaussian") {
    preset::AnisotropicGaussian a;
    read(j, "mass", a.mass);
    if (j.contains("sigma")) a.sigma = point(j.at("sigma"));
    if (j.contains("center")) a.center = point(j.at("center"));
    return a;
  }
  if (type == "random_bumps") {
    preset::RandomBumps r;
    read(j, "seed", r.seed);
    read(j, "count", r.count);
    return r;
  }
  throw ConfigError("unknown initial data type '" + type + "'");
}

json preset_to_json(const Preset& p) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, preset::Gaussian>) {
          json j = gaussian_to_json(v);
          j["type"] = "gaussian";
          return j;
        } else if constexpr (std::is_same_v<T, preset::Spike>) {
          return {{"type", "spike"}, {"mass", v.mass}, {"width_cells", v.width_cells}};
        } else if constexpr (std::is_same_v<T, preset::TwoBumps>) {
          return {{"type", "two_bumps"}, {"first", gaussian_to_json(v.first)}, {"second", gaussian_to_json(v.second)}};
        } else if constexpr (std::is_same_v<T, preset::AnisotropicGaussian>) {
          return {{"type", "anisotropic_gaussian"}, {"mass", v.mass}, {"sigma", v.sigma}, {"center", v.center}};
        } else {
          return {{"type", "random_bumps"}, {"seed", v.seed}, {"count", v.count}};
        }
      },
      p);
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.name = to_string(e);
  c.output_dir = std::filesystem::path("out") / c.name;
  c.inequalities.c_d_sweep = {1.0 / (4.0 * std::numbers::pi), 1.0 / (8.0 * std::numbers::pi), 1.0};
  SolverConfig& s = c.solver;
  switch (e) {
    case Experiment::heat_comparison:
      // A 2-cell spike on a wider box: the heat run stays inside the
      // boundary-mass window long enough to reach its asymptotic slope.
      s.n = 96;
      s.L = 24.0;
      s.initial = preset::Spike{1.0, 2.0};
      s.T = 3.2;
      s.p_list = {2.0, 3.0};
      s.m_list = {2.0};
      c.fit_window = FitWindow{1.0, 3.2};
      c.sample_first = 0.25;
      break;
    case Experiment::degiorgi:
      s.initial = c.degiorgi.initial;
      s.T = c.degiorgi.t;
      s.p_list = {2.0, 3.0};
      break;
    default:
      s.n = 64;
      s.L = 16.0;
      s.initial = preset::Spike{1.0, 3.0};
      s.T = 400.0;
      s.dt_max = 10.0;
      s.p_list = {2.0, 3.0, 4.0};
      s.m_list = {2.0, 4.0};
      c.fit_window = FitWindow{30.0, 400.0};
      break;
  }
  return c;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a table/object");
  if (!j.contains("experiment")) throw ConfigError("configuration needs 'experiment'");
  ExperimentConfig c = default_config(experiment_from_string(j.at("experiment").get<std::string>()));
  read(j, "name", c.name);
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("solver")) solver_from_json(j.at("solver"), c.solver, c);
  if (j.contains("fit_window")) {
    const auto w = j.at("fit_window").get<std::vector<double>>();
    if (w.size() != 2) throw ConfigError("fit_window needs [t_a, t_b]");
    c.fit_window = FitWindow{w[0], w[1]};
  }
  read(j, "boundary_tol", c.boundary_tol);
  read(j, "variation_max", c.variation_max);
  read(j, "lp_slope_range", c.lp_slope_range);
  read(j, "floor_collapse", c.floor_collapse);
  if (j.contains("kernel")) {
    const json& k = j.at("kernel");
    read(k, "n", c.kernel.n);
    read(k, "refine_n", c.kernel.refine_n);
    read(k, "L", c.kernel.L);
    read(k, "mass", c.kernel.mass);
    read(k, "sigma", c.kernel.sigma);
    read(k, "cells", c.kernel.cells);
    read(k, "seed", c.kernel.seed);
    read(k, "cell_radius", c.kernel.cell_radius);
    read(k, "oracle_tol", c.kernel.oracle_tol);
    read(k, "min_order", c.kernel.min_order);
    read(k, "div_n", c.kernel.div_n);
    read(k, "div_L", c.kernel.div_L);
    read(k, "div_sigma", c.kernel.div_sigma);
  }
  if (j.contains("inequalities")) {
    const json& q = j.at("inequalities");
    InequalitySettings& s = c.inequalities;
    read(q, "n", s.n);
    read(q, "L", s.L);
    read(q, "family_size", s.family_size);
    read(q, "family_seed", s.family_seed);
    read(q, "pq", s.pq);
    read(q, "truncation_a", s.truncation_a);
    read(q, "dilation_n", s.dilation_n);
    read(q, "dilation_sigma", s.dilation_sigma);
    read(q, "dilations", s.dilations);
    read(q, "mass_scale", s.mass_scale);
    read(q, "lemma_p_A", s.lemma_p_A);
    read(q, "lemma_p_divA", s.lemma_p_divA);
    read(q, "poincare_masses", s.poincare_masses);
    read(q, "poincare_sigmas", s.poincare_sigmas);
    read(q, "poincare_p", s.poincare_p);
    read(q, "c_d_sweep", s.c_d_sweep);
    read(q, "sobolev_family", s.sobolev_family);
    read(q, "sobolev_s", s.sobolev_s);
    read(q, "sobolev_refine_n", s.sobolev_refine_n);
  }
  if (j.contains("degiorgi")) {
    const json& d = j.at("degiorgi");
    DeGiorgiSettings& s = c.degiorgi;
    read(d, "t", s.t);
    read(d, "K", s.K);
    read(d, "p", s.p);
    read(d, "m", s.m);
    read(d, "grids", s.grids);
    read(d, "L", s.L);
    read(d, "c_p", s.c_p);
    read(d, "stability", s.stability);
    if (d.contains("initial")) s.initial = preset_from_json(d.at("initial"));
    if (d.contains("M") && !d.at("M").is_null()) s.M = d.at("M").get<double>();
  }
  if (j.contains("heat")) {
    read(j.at("heat"), "heat_slope_max", c.heat.heat_slope_max);
    read(j.at("heat"), "margin", c.heat.margin);
  }
  if (j.contains("moments")) {
    read(j.at("moments"), "moment_m", c.moments.moment_m);
    read(j.at("moments"), "lemma_p", c.moments.lemma_p);
  }
  if (c.experiment == Experiment::degiorgi) {
    c.solver.initial = c.degiorgi.initial;
    c.solver.T = c.degiorgi.t;
  }
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }
  if (fit_window) {
    if (!(fit_window->t_a > 0.0 && fit_window->t_a < fit_window->t_b && fit_window->t_b <= solver.T))
      throw ConfigError("fit window must satisfy 0 < t_a < t_b <= T");
  }
  if (!(sample_first > 0.0 && sample_first <= solver.T)) throw ConfigError("sample_first must lie in (0, T]");
  if (per_decade < 1) throw ConfigError("per_decade must be positive");
  for (const auto& [p, q] : inequalities.pq) {
    try {
      interpolation_moment(p, q);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("inequalities.pq: ") + e.what());
    }
  }
  if (!(inequalities.lemma_p_A > kDim / 2.0)) throw ConfigError("lemma_p_A must exceed d/2");
  if (!(inequalities.lemma_p_divA > kDim)) throw ConfigError("lemma_p_divA must exceed d");
  for (double c : inequalities.c_d_sweep)
    if (!(c > 0.0)) throw ConfigError("c_d sweep values must be positive");
  for (double a : inequalities.truncation_a)
    if (!(a > 0.0)) throw ConfigError("truncation exponents must be positive");
  if (!(degiorgi.t > 0.0) || degiorgi.K < 1) throw ConfigError("degiorgi needs t > 0 and K >= 1");
  if (degiorgi.grids.empty()) throw ConfigError("degiorgi needs at least one grid");
  if (const auto params = parameters(kDim, degiorgi.p, degiorgi.m); !params.valid)
    throw ConfigError("degiorgi: " + params.reason);
  if (!(moments.lemma_p > kDim)) throw ConfigError("moments.lemma_p must exceed d");
  if (kernel.cells < 1 || kernel.refine_n <= kernel.n) throw ConfigError("kernel needs cells >= 1 and refine_n > n");
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto ext = path.extension().string();
  json j;
  if (ext == ".toml") {
    j = parse_toml(text);
  } else if (ext == ".json") {
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
  } else {
    j = json::parse(text, nullptr, false);
    if (j.is_discarded()) j = parse_toml(text);
  }
  return config_from_json(j);
}

json config_to_json(const ExperimentConfig& c) {
  const SolverConfig& s = c.solver;
  json solver = {{"n", s.n},
                 {"L", s.L},
                 {"T", s.T},
                 {"cfl", s.cfl},
                 {"refresh_every", s.refresh_every},
                 {"mode", s.mode == Mode::landau_diffusion ? "landau_diffusion" : "heat_baseline"},
                 {"cross_stencil", s.cross_stencil == CrossStencil::limited ? "limited" : "average"},
                 {"c_d", s.c_d},
                 {"p_list", s.p_list},
                 {"m_list", s.m_list},
                 {"negativity_tol", s.negativity_tol},
                 {"dt_max", s.dt_max},
                 {"poincare_p", s.poincare_p},
                 {"initial", preset_to_json(s.initial)},
                 {"sample_first", c.sample_first},
                 {"per_decade", c.per_decade}};
  json j = {{"experiment", to_string(c.experiment)},
            {"name", c.name},
            {"output_dir", c.output_dir.string()},
            {"solver", solver},
            {"boundary_tol", c.boundary_tol}};
  if (c.fit_window) j["fit_window"] = {c.fit_window->t_a, c.fit_window->t_b};
  return j;
}

}  // namespace landau
