#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "landau/presets.hpp"
#include "landau/solver.hpp"

namespace landau {

enum class Experiment {
  lp_decay,
  linf_decay,
  heat_comparison,
  moments,
  inequalities,
  degiorgi,
  kernel_validate,
  rates,  // lp_decay, linf_decay and moments on one shared trajectory
  all,    // every acceptance item
};

std::string to_string(Experiment e);
/// Throws std::invalid_argument for an empty or unknown name.
Experiment experiment_from_string(const std::string& name);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FitWindow {
  double t_a = 0.0;
  double t_b = 0.0;
};

struct KernelSettings {
  int n = 64;
  int refine_n = 128;
  double L = 16.0;
  double mass = 1.0;
  double sigma = 1.0;
  int cells = 10;
  std::uint64_t seed = 1;
  double cell_radius = 3.0;  // random cells are drawn with |x| <= cell_radius
  double oracle_tol = 0.01;
  double min_order = 1.8;
  // Divergence identity is checked on a finer, wider Gaussian.
  int div_n = 96;
  double div_L = 16.0;
  double div_sigma = 2.0;
};

struct InequalitySettings {
  int n = 64;
  double L = 16.0;
  int family_size = 100;
  std::uint64_t family_seed = 1000;
  std::vector<std::array<double, 2>> pq{{2.0, 3.0}, {3.0, 4.0}};
  std::vector<double> truncation_a{0.5, 1.0, 2.0};
  int dilation_n = 96;
  double dilation_sigma = 1.0;
  std::vector<double> dilations{0.5, 2.0};
  double mass_scale = 10.0;
  double lemma_p_A = 2.0;
  double lemma_p_divA = 4.0;
  std::vector<double> poincare_masses{1.0, 10.0};
  std::vector<double> poincare_sigmas{1.0, 1.5, 2.0};
  double poincare_p = 2.0;
  std::vector<double> c_d_sweep;  // default {1/(4 pi), 1/(8 pi), 1}
  int sobolev_family = 50;
  double sobolev_s = 2.0;
  int sobolev_refine_n = 128;
};

struct DeGiorgiSettings {
  double t = 8.0;
  int K = 8;
  double p = 3.0;
  double m = 27.0;
  std::vector<int> grids{64, 96};
  double L = 16.0;
  Preset initial = preset::Gaussian{1.0, 1.0, {0.0, 0.0, 0.0}};
  std::optional<double> M;  // default: ||u(t)||_inf on each grid
  double c_p = -1.0;        // negative: 4(p-1)/p
  double stability = 2.0;   // allowed max-kappa ratio across grids
};

struct HeatSettings {
  double heat_slope_max = -0.65;
  double margin = 0.1;
};

struct MomentSettings {
  double moment_m = 2.0;
  double lemma_p = 6.0;  // p in c = ||u||_1^{(p-d)/(d(p-1))}
};

struct ExperimentConfig {
  std::string name;
  Experiment experiment = Experiment::lp_decay;
  SolverConfig solver;
  std::optional<FitWindow> fit_window;
  double sample_first = 0.1;
  int per_decade = 32;
  double boundary_tol = 1e-4;
  double variation_max = 3.0;
  std::array<double, 2> lp_slope_range{-0.65, -0.35};
  double floor_collapse = 10.0;
  std::filesystem::path output_dir = "out";
  KernelSettings kernel;
  InequalitySettings inequalities;
  DeGiorgiSettings degiorgi;
  HeatSettings heat;
  MomentSettings moments;

  /// Throws ConfigError when a precondition fails.
  void validate() const;
};

/// Settings used by the acceptance suite for each experiment.
ExperimentConfig default_config(Experiment e);

/// Defaults for `experiment`, overridden by every key present in `j`.
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Reads a .toml or .json file (by extension; other extensions are tried as
/// JSON first, then TOML). Relative output directories are kept as given.
ExperimentConfig load_config(const std::filesystem::path& path);

Preset preset_from_json(const nlohmann::json& j);
nlohmann::json preset_to_json(const Preset& p);
nlohmann::json config_to_json(const ExperimentConfig& c);

}  // namespace landau
