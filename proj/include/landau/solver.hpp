#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "landau/grid.hpp"
#include "landau/kernel.hpp"
#include "landau/presets.hpp"

namespace landau {

enum class Mode { landau_diffusion, heat_baseline };

/// Discretisation of the transverse derivatives in the face fluxes.
/// `average` is the plain four-point average; `limited` combines the same
/// four differences through a monotonised-central limiter, which agrees with
/// the average on smooth data and suppresses undershoots at steep fronts.
enum class CrossStencil { average, limited };

struct SolverConfig {
  int n = 64;
  double L = 16.0;
  Preset initial = preset::Spike{};
  double T = 1.0;
  double cfl = 0.5;
  /// A is recomputed every `refresh_every` steps (1 = every step).
  int refresh_every = 1;
  Mode mode = Mode::landau_diffusion;
  CrossStencil cross_stencil = CrossStencil::limited;
  double c_d = kDefaultCd;
  std::vector<double> sample_times;
  std::vector<double> p_list{2.0};
  std::vector<double> m_list{2.0};
  /// Relative to ||u||_inf: the run aborts when min u < -negativity_tol ||u||_inf.
  double negativity_tol = 1e-8;
  double dt_max = 1.0;
  double poincare_p = 2.0;
  /// When set, a snapshot is written at every diagnostic sample.
  std::optional<std::filesystem::path> snapshot_dir;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double entropy = 0.0;
  std::vector<double> lp;
  double linf = 0.0;
  std::vector<double> l1m;
  std::vector<double> dissipation;
  double poincare_ratio = 0.0;
  double ellipticity_floor = 0.0;
  double min_u = 0.0;
  double dt = 0.0;
  double boundary_mass = 0.0;
};

struct Trajectory {
  std::vector<double> p_list;
  std::vector<double> m_list;
  std::vector<DiagnosticsRecord> records;
  std::vector<std::filesystem::path> snapshots;
  double initial_mass = 0.0;
  double first_dt = 0.0;
  int steps = 0;

  /// Series of one column, by header name (e.g. "lp2", "linf", "mass").
  std::vector<double> column(const std::string& name) const;
  std::vector<double> times() const;
};

struct StepReport {
  double dt = 0.0;
  double min_value = 0.0;
  double mass_drift = 0.0;  // relative change over the step
};

class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(const std::string& what, std::optional<std::filesystem::path> dump)
      : std::runtime_error(what), dump_(std::move(dump)) {}
  const std::optional<std::filesystem::path>& dump() const { return dump_; }

 private:
  std::optional<std::filesystem::path> dump_;
};

/// div(A grad u) by a conservative face-flux difference.
///
/// Face flux in direction j is sum_k Abar_jk (d_k u)|face with Abar the mean
/// of the two adjacent cells, the normal derivative a two-point difference
/// and transverse derivatives four-point averages. Boundary faces carry no
/// flux, so the cell sum of the result telescopes to zero.
ScalarField apply_diffusion(const ScalarField& u, const SymMatrixField& A,
                            CrossStencil stencil = CrossStencil::limited);

/// sigma h^2 / (2 d max lambda_max(A)), or dt_max when A has no positive
/// eigenvalue.
double cfl_dt(const SymMatrixField& A, double h, double sigma, double dt_max);

/// Owns the evolving state of one run.
class Solver {
 public:
  explicit Solver(SolverConfig config);

  const SolverConfig& config() const { return config_; }
  const ScalarField& state() const { return u_; }
  double time() const { return t_; }
  const KernelTable& table() const { return table_; }
  ConvolutionPlan& plan() { return plan_; }

  /// Coefficient the current mode uses for u (identity in heat mode).
  SymMatrixField coefficient(const ScalarField& u);

  /// One midpoint Runge-Kutta step with the coefficient frozen over both
  /// stages. `dt_cap` shortens the step (used to land on T).
  StepReport step(double dt_cap);

  DiagnosticsRecord diagnostics(const SymMatrixField& landau_A) const;

  void reset(const ScalarField& u0, double t0 = 0.0);

  /// Hands over A[u] for the current state so the next step does not
  /// recompute it. Ignored in heat mode or when no refresh is due.
  void prime(SymMatrixField landau_A);

 private:
  SolverConfig config_;
  Grid grid_;
  KernelTable table_;
  ConvolutionPlan plan_;
  ScalarField u_;
  double t_ = 0.0;
  long step_count_ = 0;
  std::optional<SymMatrixField> frozen_;
  double frozen_dt_ = 0.0;
  bool primed_ = false;
};

/// Called at every diagnostic sample with the record and the state.
using SampleObserver = std::function<void(const DiagnosticsRecord&, const ScalarField&)>;

/// Integrates from t = 0 to T, emitting records at the steps nearest to the
/// configured sample times and always at T.
Trajectory run(const SolverConfig& config, const SampleObserver& observer = {});

/// Explicit L^p decay envelope from the Poincare-driven ODE:
/// ((p-1)/C)^{1-1/p} t^{-(1-1/p)} with C = 4p(p-1)/(p+1)^2 mass^{-1/(p-1)}.
double theoretical_lp_envelope(double p, double mass, double t);

/// Upper solution of y' = c t^{-(d-1)/d} y + C t^{-(d-2)/d}, y(0) = y0, via the
/// integrating factor exp(-c d t^{1/d}) and adaptive quadrature.
double moment_envelope(double y0, double t, double c, double C);

/// Writes the trajectory as diagnostics.csv (fixed header, %.17g values).
void write_diagnostics_csv(const Trajectory& traj, const std::filesystem::path& path);
std::string diagnostics_header(const Trajectory& traj);

/// `per_decade` log-spaced times in [t_first, T], T always included.
std::vector<double> log_spaced_times(double t_first, double T, int per_decade);

}  // namespace landau
