#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "landau/grid.hpp"

namespace landau {

/// Exponents of the level-set recursion for (d, p, m).
struct DeGiorgiParams {
  int d = 3;
  double p = 0.0;
  double m = 0.0;
  double gamma = 0.0;    // -1 + 2p/d - 3(d-2)(p-1)/m
  double beta1 = 0.0;    // 2/d - 3(d-2)/m
  double epsilon = 0.0;  // (1 - 2/d)/(1 + gamma)
  double m_min = 0.0;    // (3d(d-2)/2) max{1, (p-1)/(p-d/2)}
  bool valid = false;
  std::string reason;  // first violated constraint when !valid
};

/// Never throws; out-of-range input comes back with valid = false.
DeGiorgiParams parameters(int d, double p, double m);

/// Dyadic levels C_k = M(1 - 2^-k) and time gates T_k = (t/2)(1 - 2^-k),
/// tabulated for k = 0..K.
struct LevelSchedule {
  double M = 0.0;
  double t = 0.0;
  int K = 0;
  std::vector<double> C;
  std::vector<double> T;

  double level(int k) const;
  double gate(int k) const;
};

LevelSchedule schedule(double M, double t, int K);

/// (u - c)_+ cell by cell.
ScalarField truncate(const ScalarField& u, double c);

/// Level energies E_0..E_K of one trajectory window.
///
/// E_k = sup over samples in (T_{k+1}, t] of sum (u - C_k)_+^p h^3
///     + C(p) * sum over the same samples of grad_term * dtau,
/// with grad_term the <x>^{-d}-weighted Dirichlet energy of (u - C_k)_+^{p/2}.
/// `E_A` replaces that weight by A[u]; it is filled only when every sample
/// carried A.
struct EnergySeries {
  std::vector<double> E;
  std::vector<double> sup_term;
  std::vector<double> grad_term;
  std::vector<double> E_A;
  int samples = 0;  // samples that fell in (t/4, t]
};

/// Streams trajectory samples into the energies without storing fields.
class EnergyAccumulator {
 public:
  EnergyAccumulator(LevelSchedule sched, double p, double c_p = -1.0);

  /// `dtau` is the length of the step that ended at `tau`. Samples at or
  /// before t/4 or after t are ignored.
  void add(double tau, double dtau, const ScalarField& u, const SymMatrixField* A = nullptr);

  /// Throws std::runtime_error with fewer than 16 samples in (t/4, t].
  EnergySeries finish() const;

  const LevelSchedule& levels() const { return sched_; }
  double p() const { return p_; }
  double c_p() const { return c_p_; }

 private:
  LevelSchedule sched_;
  double p_;
  double c_p_;
  int samples_ = 0;
  bool all_have_A_ = true;
  std::vector<double> sup_, grad_, grad_A_;
};

struct EnergySample {
  double tau = 0.0;
  double dtau = 0.0;
  ScalarField u;
  std::optional<SymMatrixField> A;
};

/// Convenience wrapper over EnergyAccumulator for stored samples.
EnergySeries energies(const std::vector<EnergySample>& samples, const LevelSchedule& sched, double p,
                      double c_p = -1.0);

/// Default C(p) = 4(p-1)/p.
double default_energy_constant(double p);

struct RecursionLevel {
  int k = 0;
  double E_prev = 0.0;
  double E = 0.0;
  double kappa = 0.0;  // E_k t M^{1+gamma} / E_{k-1}^{1+beta1}
};

struct RecursionReport {
  std::vector<RecursionLevel> levels;  // levels with E_{k-1} = 0 are skipped
  double max_kappa = 0.0;
  /// Fitted b in log E_k = a + b^k log r; empty with fewer than three
  /// consecutive positive energies.
  std::optional<double> growth_exponent;
};

/// Throws std::invalid_argument for invalid params.
RecursionReport recursion_report(const EnergySeries& series, const DeGiorgiParams& params, double M, double t);

/// Least-squares b from D_{k+1} = b D_k with D_k = log E_{k+1} - log E_k.
std::optional<double> fit_growth_exponent(const std::vector<double>& E);

/// k,C_k,T_k,E_k,kappa_k with kappa empty where undefined.
void write_degiorgi_csv(const EnergySeries& series, const RecursionReport& report, const LevelSchedule& sched,
                        const std::filesystem::path& path);

}  // namespace landau
