#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "landau/config.hpp"
#include "landau/solver.hpp"

namespace landau {

/// Least-squares fit of log(value) against log(t).
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  FitWindow window;
  int samples = 0;

  nlohmann::json to_json() const;
};

/// Fits the samples with t in [window.t_a, window.t_b]. Throws
/// std::invalid_argument with fewer than 5 samples there or a nonpositive
/// value among them.
RateFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& values, const FitWindow& window);

inline constexpr int kAcceptanceItems = 12;

enum class ItemStatus { not_evaluated, pass, fail };

struct AcceptanceItem {
  int id = 0;
  std::string title;
  ItemStatus status = ItemStatus::not_evaluated;
  nlohmann::json evidence = nlohmann::json::array();  // one entry per evaluation
};

/// Per-experiment outcome. Every acceptance item appears exactly once; an
/// item evaluated several times (e.g. item 3 on each run) passes only if
/// every evaluation passed.
class SummaryReport {
 public:
  SummaryReport();

  void record(int item, bool pass, nlohmann::json evidence);
  const AcceptanceItem& item(int id) const;
  const std::array<AcceptanceItem, kAcceptanceItems>& items() const { return items_; }

  /// True when no item failed and at least one was evaluated.
  bool all_pass() const;
  int exit_code() const { return all_pass() ? 0 : 1; }

  /// Folds another report in (items, fits, files).
  void merge(const SummaryReport& other);

  nlohmann::json& fits() { return fits_; }
  nlohmann::json& envelopes() { return envelopes_; }
  nlohmann::json& suprema() { return suprema_; }
  nlohmann::json& notes() { return notes_; }
  void add_file(const std::filesystem::path& p);
  const std::vector<std::string>& files() const { return files_; }

  nlohmann::json to_json() const;

  std::string experiment;

 private:
  std::array<AcceptanceItem, kAcceptanceItems> items_;
  nlohmann::json fits_ = nlohmann::json::object();
  nlohmann::json envelopes_ = nlohmann::json::object();
  nlohmann::json suprema_ = nlohmann::json::object();
  nlohmann::json notes_ = nlohmann::json::object();
  std::vector<std::string> files_;
};

std::string to_string(ItemStatus s);

/// One line per item: status, id, title and the headline measurements of
/// every evaluation, e.g. "PASS  6  L^1 to L^2 decay rate: slope=-0.42 ...".
std::string headline(const AcceptanceItem& item);

/// Runs one experiment and writes its outputs (diagnostics.csv, degiorgi.csv,
/// checks/*.json, summary.json) under config.output_dir. Solver aborts
/// propagate after a partial summary flagged "aborted" is written.
SummaryReport run_experiment(const ExperimentConfig& config);

/// Paired Landau and heat runs from the same initial data and grid, fitted
/// over the same window of the heat run's boundary-mass rule. Records
/// item 7 (and item 3 for both runs).
SummaryReport compare_landau_heat(const ExperimentConfig& config);

/// Fit window clipped to t >= 10 * first_dt and to the samples before the
/// first one whose boundary mass fraction reaches `tol`. Empty when nothing
/// remains.
std::optional<FitWindow> clip_window(const Trajectory& traj, const FitWindow& requested,
                                     const std::vector<double>& boundary_mass, double tol);

/// Individual checks, exposed for the tests and the acceptance binary.
namespace checks {

/// Item 3 over one trajectory.
nlohmann::json conservation(const Trajectory& traj, bool& pass);

/// Item 12 over one trajectory; `initial_floor` is the floor of A[u_in].
nlohmann::json ellipticity(const Trajectory& traj, double initial_floor, double collapse, bool& pass);

/// Smallest C >= 0 with (y_{i+1} - y_i)/dt <= c t^{-(d-1)/d} y + C t^{-(d-2)/d}
/// at the midpoint of every sample interval (samples include t = 0).
double fit_moment_forcing(const std::vector<double>& t, const std::vector<double>& y, double c);

}  // namespace checks

}  // namespace landau
