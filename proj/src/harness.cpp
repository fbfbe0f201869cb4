#include "landau/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "harness_detail.hpp"
#include "landau/degiorgi.hpp"
#include "landau/functionals.hpp"

namespace landau {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Rate fits

json RateFit::to_json() const {
  return {{"slope", slope},           {"intercept", intercept},   {"residual_rms", residual_rms},
          {"window", {window.t_a, window.t_b}}, {"samples", samples}};
}

RateFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& values, const FitWindow& window) {
  if (t.size() != values.size()) throw std::invalid_argument("fit_decay_rate: t and values differ in length");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window.t_a * (1.0 - 1e-12) || t[i] > window.t_b * (1.0 + 1e-12)) continue;
    if (!(values[i] > 0.0) || !(t[i] > 0.0))
      throw std::invalid_argument("fit_decay_rate: nonpositive sample at t=" + std::to_string(t[i]));
    x.push_back(std::log(t[i]));
    y.push_back(std::log(values[i]));
  }
  if (x.size() < 5)
    throw std::invalid_argument("fit_decay_rate: " + std::to_string(x.size()) + " samples in window, need 5");
  const double k = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_decay_rate: window holds a single time");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.residual_rms = std::sqrt(ss / k);
  f.window = window;
  f.samples = static_cast<int>(x.size());
  return f;
}

// ---------------------------------------------------------------------------
// Summary

namespace {

constexpr const char* kTitles[kAcceptanceItems] = {
    "kernel oracle equivalence",
    "structural identities",
    "conservation and monotonicity",
    "coefficient bound homogeneity",
    "constant-1 interpolation and truncation",
    "L^1 to L^2 decay rate",
    "heat comparison",
    "L^inf decay boundedness",
    "moment envelope",
    "De Giorgi recursion",
    "Poincare sweep",
    "ellipticity floor",
};

std::string param_key(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string to_string(ItemStatus s) {
  switch (s) {
    case ItemStatus::pass: return "pass";
    case ItemStatus::fail: return "fail";
    default: return "not_evaluated";
  }
}

std::string headline(const AcceptanceItem& item) {
  static const std::vector<std::vector<std::string>> keys = {
      {"oracle_max_rel_error", "order", "seconds"},
      {"trace_rel_error", "divergence_rel_l2", "min_eigen_ratio"},
      {"run", "mass_drift", "min_u_over_linf"},
      {"mass_deviation", "dilation_deviation"},
      {"pairs", "truncation_worst_relative_excess"},
      {"slope", "scaled_variation", "envelope_ratio_sup"},
      {"slope_landau", "slope_heat", "gap"},
      {"scaled_variation", "linf_slope"},
      {"envelope_ratio_sup", "c", "C"},
      {"max_kappa_ratio", "monotone", "worked_values_deviation"},
      {"calibrated_c_d", "sup_ratio_at_calibrated", "inverse_c_d_deviation"},
      {"run", "collapse_factor", "growth_factor"},
  };
  const char* status = item.status == ItemStatus::pass ? "PASS" : item.status == ItemStatus::fail ? "FAIL" : "SKIP";
  char head[96];
  std::snprintf(head, sizeof head, "%s %2d  %s", status, item.id, item.title.c_str());
  std::string line = head;
  std::string sep = ": ";
  for (const auto& e : item.evidence) {
    std::string part;
    for (const auto& k : keys[item.id - 1]) {
      if (!e.contains(k)) continue;
      const json& v = e.at(k);
      std::string text;
      if (v.is_number_float()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", v.get<double>());
        text = buf;
      } else {
        text = v.is_string() ? v.get<std::string>() : v.dump();
      }
      part += (part.empty() ? "" : " ") + k + "=" + text;
    }
    line += sep + part;
    sep = "; ";
  }
  return line;
}

SummaryReport::SummaryReport() {
  for (int i = 0; i < kAcceptanceItems; ++i) {
    items_[i].id = i + 1;
    items_[i].title = kTitles[i];
  }
}

void SummaryReport::record(int item, bool pass, json evidence) {
  if (item < 1 || item > kAcceptanceItems) throw std::out_of_range("acceptance item " + std::to_string(item));
  AcceptanceItem& it = items_[item - 1];
  evidence["pass"] = pass;
  it.evidence.push_back(std::move(evidence));
  if (!pass)
    it.status = ItemStatus::fail;
  else if (it.status == ItemStatus::not_evaluated)
    it.status = ItemStatus::pass;
}

const AcceptanceItem& SummaryReport::item(int id) const {
  if (id < 1 || id > kAcceptanceItems) throw std::out_of_range("acceptance item " + std::to_string(id));
  return items_[id - 1];
}

bool SummaryReport::all_pass() const {
  bool any = false;
  for (const auto& it : items_) {
    if (it.status == ItemStatus::fail) return false;
    any = any || it.status == ItemStatus::pass;
  }
  return any;
}

void SummaryReport::merge(const SummaryReport& other) {
  for (const auto& it : other.items_)
    for (const auto& e : it.evidence) record(it.id, e.value("pass", false), e);
  const std::string prefix = other.experiment.empty() ? "" : other.experiment + ".";
  for (auto [dst, src] : {std::pair{&fits_, &other.fits_}, std::pair{&envelopes_, &other.envelopes_},
                          std::pair{&suprema_, &other.suprema_}, std::pair{&notes_, &other.notes_}})
    for (const auto& [k, v] : src->items()) (*dst)[prefix + k] = v;
  for (const auto& f : other.files_) files_.push_back(other.experiment.empty() ? f : other.experiment + "/" + f);
}

void SummaryReport::add_file(const fs::path& p) { files_.push_back(p.generic_string()); }

json SummaryReport::to_json() const {
  json items = json::array();
  for (const auto& it : items_)
    items.push_back({{"id", it.id}, {"title", it.title}, {"status", to_string(it.status)}, {"measured", it.evidence}});
  return {{"experiment", experiment}, {"all_pass", all_pass()}, {"items", items},
          {"fits", fits_},           {"envelopes", envelopes_}, {"suprema", suprema_},
          {"notes", notes_},         {"files", files_}};
}

// ---------------------------------------------------------------------------
// Shared helpers

namespace detail {

void write_json(const fs::path& output_dir, const std::string& relative, const json& j, SummaryReport& report) {
  const fs::path path = output_dir / relative;
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  report.add_file(relative);
}

double variation(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
}

}  // namespace detail

std::optional<FitWindow> clip_window(const Trajectory& traj, const FitWindow& requested,
                                     const std::vector<double>& boundary_mass, double tol) {
  if (boundary_mass.size() != traj.records.size())
    throw std::invalid_argument("clip_window: one boundary-mass value per record expected");
  FitWindow w{std::max(requested.t_a, 10.0 * traj.first_dt), requested.t_b};
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    if (boundary_mass[i] < tol) continue;
    if (i == 0) return std::nullopt;
    w.t_b = std::min(w.t_b, traj.records[i - 1].t);
    break;
  }
  if (!(w.t_a < w.t_b)) return std::nullopt;
  return w;
}

namespace checks {

json conservation(const Trajectory& traj, bool& pass) {
  const auto& rs = traj.records;
  const double m0 = traj.initial_mass;
  double drift = 0.0;
  for (const auto& r : rs) drift = std::max(drift, std::abs(r.mass - m0) / std::abs(m0));

  // Largest relative increase between consecutive records.
  auto worst_increase = [&](auto&& get) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < rs.size(); ++i) {
      const double a = get(rs[i - 1]), b = get(rs[i]);
      worst = std::max(worst, (b - a) / std::max(std::abs(a), std::numeric_limits<double>::min()));
    }
    return worst;
  };
  constexpr double slack = 1e-8;
  const double entropy_inc = worst_increase([](const DiagnosticsRecord& r) { return r.entropy; });
  bool ok = drift <= 1e-10 && entropy_inc <= slack;
  json lp = json::object();
  for (std::size_t q = 0; q < traj.p_list.size(); ++q) {
    const double inc = worst_increase([q](const DiagnosticsRecord& r) { return r.lp[q]; });
    lp[param_key(traj.p_list[q])] = inc;
    ok = ok && inc <= slack;
  }
  double min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& r : rs) min_ratio = std::min(min_ratio, r.min_u / r.linf);
  ok = ok && min_ratio >= -1e-8;
  pass = ok && rs.size() >= 2;
  return {{"records", rs.size()},
          {"mass_drift", drift},
          {"entropy_worst_increase", rs.size() >= 2 ? json(entropy_inc) : json(nullptr)},
          {"lp_worst_increase", lp},
          {"min_u_over_linf", min_ratio}};
}

json ellipticity(const Trajectory& traj, double initial_floor, double collapse, bool& pass) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  bool positive = initial_floor > 0.0;
  for (const auto& r : traj.records) {
    positive = positive && r.ellipticity_floor > 0.0;
    lo = std::min(lo, r.ellipticity_floor);
    hi = std::max(hi, r.ellipticity_floor);
  }
  const double down = initial_floor / lo, up = hi / initial_floor;
  pass = positive && !traj.records.empty() && down <= collapse && up <= collapse;
  return {{"initial_floor", initial_floor}, {"min_floor", lo}, {"max_floor", hi}, {"collapse_factor", down},
          {"growth_factor", up},           {"allowed", collapse}, {"records", traj.records.size()}};
}

double fit_moment_forcing(const std::vector<double>& t, const std::vector<double>& y, double c) {
  if (t.size() != y.size() || t.size() < 2) throw std::invalid_argument("fit_moment_forcing: need matching series");
  constexpr double d = kDim;
  double C = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double dt = t[i + 1] - t[i];
    if (!(dt > 0.0)) throw std::invalid_argument("fit_moment_forcing: times must increase");
    const double tm = 0.5 * (t[i] + t[i + 1]);
    const double ym = 0.5 * (y[i] + y[i + 1]);
    const double slope = (y[i + 1] - y[i]) / dt;
    const double need = (slope - c * std::pow(tm, -(d - 1.0) / d) * ym) * std::pow(tm, (d - 2.0) / d);
    C = std::max(C, need);
  }
  return C;
}

}  // namespace checks

// ---------------------------------------------------------------------------
// Run-based experiments

namespace {

double initial_floor(const SolverConfig& s, const ScalarField& u0) {
  const KernelTable table = build_kernel_table(u0.grid(), s.c_d, KernelSet::matrix);
  ConvolutionPlan plan(u0.grid());
  return ellipticity_profile(compute_A(u0, table, plan)).floor;
}

SolverConfig sampled(const ExperimentConfig& c) {
  SolverConfig s = c.solver;
  if (s.sample_times.empty()) s.sample_times = log_spaced_times(c.sample_first, s.T, c.per_decade);
  return s;
}

std::size_t index_of(const std::vector<double>& list, double v, const char* what) {
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i] == v) return i;
  throw ConfigError(std::string(what) + " " + std::to_string(v) + " is not configured");
}

// Samples with t inside the window.
std::vector<double> in_window(const std::vector<double>& t, const std::vector<double>& v, const FitWindow& w) {
  std::vector<double> out;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= w.t_a * (1.0 - 1e-12) && t[i] <= w.t_b * (1.0 + 1e-12)) out.push_back(v[i]);
  return out;
}

json window_json(const FitWindow& w) { return json::array({w.t_a, w.t_b}); }

FitWindow requested_window(const ExperimentConfig& c) {
  return c.fit_window.value_or(FitWindow{c.sample_first, c.solver.T});
}

FitWindow clipped_or_throw(const Trajectory& traj, const ExperimentConfig& c) {
  const auto w = clip_window(traj, requested_window(c), traj.column("boundary_mass"), c.boundary_tol);
  if (!w) throw std::runtime_error("fit window is empty after the boundary-mass rule");
  return *w;
}

void record_run_checks(const std::string& run, const Trajectory& traj, double floor0, const ExperimentConfig& c,
                       SummaryReport& report, bool ellipticity) {
  bool ok = false;
  json e = checks::conservation(traj, ok);
  e["run"] = run;
  report.record(3, ok, e);
  if (!ellipticity) return;
  json f = checks::ellipticity(traj, floor0, c.floor_collapse, ok);
  f["run"] = run;
  report.record(12, ok, f);
}

void lp_decay_item(const ExperimentConfig& c, const Trajectory& traj, const FitWindow& w, SummaryReport& report) {
  index_of(traj.p_list, 2.0, "p");
  const auto t = traj.times();
  const auto l2 = traj.column("lp2");
  const RateFit fit = fit_decay_rate(t, l2, w);
  const auto tw = in_window(t, t, w), vw = in_window(t, l2, w);
  std::vector<double> scaled, over_envelope;
  for (std::size_t i = 0; i < tw.size(); ++i) {
    scaled.push_back(std::sqrt(tw[i]) * vw[i]);
    over_envelope.push_back(vw[i] / theoretical_lp_envelope(2.0, traj.initial_mass, tw[i]));
  }
  const double var = detail::variation(scaled);
  const bool ok = fit.slope >= c.lp_slope_range[0] && fit.slope <= c.lp_slope_range[1] && var <= c.variation_max;
  const double env_sup = *std::max_element(over_envelope.begin(), over_envelope.end());
  report.envelopes()["lp2_over_theorem_envelope_sup"] = env_sup;
  report.record(6, ok,
                {{"slope", fit.slope},
                 {"slope_range", c.lp_slope_range},
                 {"scaled_variation", var},
                 {"variation_max", c.variation_max},
                 {"window", window_json(w)},
                 {"samples", fit.samples},
                 {"envelope_ratio_sup", env_sup}});
}

void linf_decay_item(const ExperimentConfig& c, const Trajectory& traj, const FitWindow& w, SummaryReport& report) {
  const DeGiorgiParams params = parameters(kDim, 3.0, 27.0);
  const auto t = traj.times();
  const auto linf = traj.column("linf");
  const auto tw = in_window(t, t, w), vw = in_window(t, linf, w);
  std::vector<double> scaled;
  for (std::size_t i = 0; i < tw.size(); ++i) scaled.push_back(std::pow(tw[i], 1.0 + params.epsilon) * vw[i]);
  const RateFit fit = fit_decay_rate(t, linf, w);
  report.fits()["linf"] = fit.to_json();
  const double var = detail::variation(scaled);
  report.record(8, var <= c.variation_max,
                {{"epsilon", params.epsilon},
                 {"scaled_variation", var},
                 {"variation_max", c.variation_max},
                 {"linf_slope", fit.slope},
                 {"window", window_json(w)},
                 {"samples", scaled.size()}});
}

void moments_item(const ExperimentConfig& c, const Trajectory& traj, const ScalarField& u0, const FitWindow& w,
                  SummaryReport& report) {
  constexpr double d = kDim;
  const std::size_t q = index_of(traj.m_list, c.moments.moment_m, "moment m");
  const double p = c.moments.lemma_p;
  const double cc = std::pow(traj.initial_mass, (p - d) / (d * (p - 1.0)));
  std::vector<double> t{0.0}, y{weighted_l1m(u0, c.moments.moment_m)};
  for (const auto& r : traj.records) {
    t.push_back(r.t);
    y.push_back(r.l1m[q]);
  }
  const double C = checks::fit_moment_forcing(t, y, cc);
  double worst = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) worst = std::max(worst, y[i] / moment_envelope(y[0], t[i], cc, C));
  bool envelope_ok = worst <= 1.0;

  // Every configured moment stays finite and non-decreasing over the window.
  json mono = json::object();
  bool mono_ok = true;
  for (std::size_t k = 0; k < traj.m_list.size(); ++k) {
    std::vector<double> series;
    for (const auto& r : traj.records)
      if (r.t >= w.t_a * (1.0 - 1e-12) && r.t <= w.t_b * (1.0 + 1e-12)) series.push_back(r.l1m[k]);
    double worst_drop = 0.0;
    bool finite = !series.empty();
    for (std::size_t i = 0; i < series.size(); ++i) {
      finite = finite && std::isfinite(series[i]);
      if (i > 0) worst_drop = std::max(worst_drop, (series[i - 1] - series[i]) / series[i - 1]);
    }
    const bool ok = finite && worst_drop <= 1e-8;
    mono_ok = mono_ok && ok;
    mono[param_key(traj.m_list[k])] = {
        {"sup", series.empty() ? 0.0 : *std::max_element(series.begin(), series.end())},
        {"worst_relative_drop", worst_drop},
        {"pass", ok}};
  }
  report.envelopes()["moment_over_envelope_sup"] = worst;
  report.record(9, envelope_ok && mono_ok,
                {{"m", c.moments.moment_m},
                 {"c", cc},
                 {"C", C},
                 {"y0", y[0]},
                 {"envelope_ratio_sup", worst},
                 {"window", window_json(w)},
                 {"moments", mono}});
}

SummaryReport spike_run(const ExperimentConfig& c) {
  SummaryReport report;
  const SolverConfig s = sampled(c);
  const Grid g = make_grid(s.n, s.L);
  const ScalarField u0 = sample_preset(g, s.initial);
  const double floor0 = initial_floor(s, u0);
  const Trajectory traj = run(s);
  write_diagnostics_csv(traj, c.output_dir / "diagnostics.csv");
  report.add_file("diagnostics.csv");

  const FitWindow w = clipped_or_throw(traj, c);
  report.notes()["fit_window"] = window_json(w);
  report.notes()["requested_window"] = window_json(requested_window(c));
  report.notes()["steps"] = traj.steps;
  report.notes()["first_dt"] = traj.first_dt;
  const auto t = traj.times();
  for (std::size_t q = 0; q < traj.p_list.size(); ++q) {
    std::vector<double> v;
    for (const auto& r : traj.records) v.push_back(r.lp[q]);
    report.fits()["lp" + param_key(traj.p_list[q])] = fit_decay_rate(t, v, w).to_json();
  }

  const bool lp = c.experiment == Experiment::lp_decay || c.experiment == Experiment::rates;
  const bool li = c.experiment == Experiment::linf_decay || c.experiment == Experiment::rates;
  const bool mo = c.experiment == Experiment::moments || c.experiment == Experiment::rates;
  record_run_checks("spike", traj, floor0, c, report, s.mode == Mode::landau_diffusion);
  if (lp) lp_decay_item(c, traj, w, report);
  if (li) linf_decay_item(c, traj, w, report);
  if (mo) moments_item(c, traj, u0, w, report);

  json checks_json = {{"window", window_json(w)}, {"fits", report.fits()}, {"envelopes", report.envelopes()}};
  for (int id : {3, 6, 8, 9, 12})
    if (report.item(id).status != ItemStatus::not_evaluated) checks_json["item" + std::to_string(id)] = report.item(id).evidence;
  detail::write_json(c.output_dir, "checks/" + to_string(c.experiment) + ".json", checks_json, report);
  return report;
}

// One De Giorgi grid: a single run to t keeping the states sampled in
// (t/4, t], then energies once M = ||u(t)||_inf is known.
json degiorgi_grid(const ExperimentConfig& c, int n, const fs::path& csv_name, SummaryReport& report,
                   double& max_kappa, bool& monotone) {
  const DeGiorgiSettings& dg = c.degiorgi;
  SolverConfig s = c.solver;
  s.n = n;
  s.L = dg.L;
  s.initial = dg.initial;
  s.T = dg.t;
  s.mode = Mode::landau_diffusion;
  s.snapshot_dir.reset();
  Solver solver(s);

  Trajectory traj;
  traj.p_list = s.p_list;
  traj.m_list = s.m_list;
  traj.initial_mass = integrate(solver.state());
  SymMatrixField A0 = compute_A(solver.state(), solver.table(), solver.plan());
  const double floor0 = ellipticity_profile(A0).floor;
  traj.records.push_back(solver.diagnostics(A0));
  solver.prime(std::move(A0));

  std::vector<EnergySample> kept;
  while (solver.time() < s.T) {
    const StepReport rep = solver.step(s.T - solver.time());
    if (traj.steps == 0) traj.first_dt = rep.dt;
    ++traj.steps;
    if (solver.time() > 0.25 * s.T) {
      SymMatrixField A = compute_A(solver.state(), solver.table(), solver.plan());
      DiagnosticsRecord r = solver.diagnostics(A);
      r.dt = rep.dt;
      traj.records.push_back(std::move(r));
      solver.prime(std::move(A));
      kept.push_back({solver.time(), rep.dt, solver.state(), std::nullopt});
    }
    if (s.T - solver.time() <= 1e-12 * s.T) break;
  }
  const std::string tag = "n" + std::to_string(n);
  write_diagnostics_csv(traj, c.output_dir / ("diagnostics_" + tag + ".csv"));
  report.add_file("diagnostics_" + tag + ".csv");
  record_run_checks("degiorgi_" + tag, traj, floor0, c, report, true);

  const double M = dg.M.value_or(linf_norm(solver.state()));
  const LevelSchedule sched = schedule(M, dg.t, dg.K);
  const EnergySeries series = energies(kept, sched, dg.p, dg.c_p);
  const DeGiorgiParams params = parameters(kDim, dg.p, dg.m);
  const RecursionReport rec = recursion_report(series, params, M, dg.t);
  write_degiorgi_csv(series, rec, sched, c.output_dir / csv_name);
  report.add_file(csv_name);

  monotone = true;
  for (int k = 1; k <= dg.K; ++k) monotone = monotone && series.E[k] <= series.E[k - 1];
  bool finite = !rec.levels.empty();
  json kappa = json::array();
  for (const auto& l : rec.levels) {
    finite = finite && std::isfinite(l.kappa);
    kappa.push_back({{"k", l.k}, {"kappa", l.kappa}});
  }
  max_kappa = finite ? rec.max_kappa : std::numeric_limits<double>::infinity();
  return {{"n", n},
          {"M", M},
          {"samples", series.samples},
          {"E", series.E},
          {"sup_term", series.sup_term},
          {"grad_term", series.grad_term},
          {"kappa", kappa},
          {"max_kappa", rec.max_kappa},
          {"growth_exponent", rec.growth_exponent ? json(*rec.growth_exponent) : json(nullptr)},
          {"monotone", monotone},
          {"kappa_finite", finite}};
}

SummaryReport degiorgi_experiment(const ExperimentConfig& c) {
  SummaryReport report;
  const DeGiorgiSettings& dg = c.degiorgi;
  const DeGiorgiParams params = parameters(kDim, dg.p, dg.m);
  const DeGiorgiParams worked = parameters(3, 3.0, 27.0);
  const double dev = std::max({std::abs(worked.gamma - 7.0 / 9.0), std::abs(worked.beta1 - 5.0 / 9.0),
                               std::abs(worked.epsilon - 0.1875)});

  json grids = json::array();
  bool monotone_all = true;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < dg.grids.size(); ++i) {
    const int n = dg.grids[i];
    const std::string csv = i == 0 ? "degiorgi.csv" : "degiorgi_n" + std::to_string(n) + ".csv";
    double max_kappa = 0.0;
    bool monotone = false;
    grids.push_back(degiorgi_grid(c, n, csv, report, max_kappa, monotone));
    monotone_all = monotone_all && monotone;
    lo = std::min(lo, max_kappa);
    hi = std::max(hi, max_kappa);
  }
  const double stability = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  const bool ok = dev <= 1e-12 && monotone_all && std::isfinite(hi) && stability <= dg.stability;
  report.suprema()["max_kappa"] = hi;
  json e = {{"params", {{"p", params.p}, {"m", params.m}, {"gamma", params.gamma}, {"beta1", params.beta1},
                        {"epsilon", params.epsilon}}},
            {"worked_values_deviation", dev},
            {"monotone", monotone_all},
            {"max_kappa_ratio", stability},
            {"allowed_ratio", dg.stability},
            {"grids", grids}};
  report.record(10, ok, e);
  detail::write_json(c.output_dir, "checks/degiorgi.json", e, report);
  return report;
}

void write_summary(const ExperimentConfig& c, const SummaryReport& report, const std::optional<std::string>& abort) {
  json j = report.to_json();
  j["config"] = config_to_json(c);
  if (abort) j["aborted"] = *abort;
  fs::create_directories(c.output_dir);
  std::ofstream out(c.output_dir / "summary.json");
  out << j.dump(2) << '\n';
}

SummaryReport dispatch(const ExperimentConfig& c) {
  switch (c.experiment) {
    case Experiment::lp_decay:
    case Experiment::linf_decay:
    case Experiment::moments:
    case Experiment::rates:
      return spike_run(c);
    case Experiment::heat_comparison:
      return compare_landau_heat(c);
    case Experiment::degiorgi:
      return degiorgi_experiment(c);
    case Experiment::kernel_validate: {
      SummaryReport r;
      detail::validate_kernel(c, r);
      return r;
    }
    case Experiment::inequalities: {
      SummaryReport r;
      detail::check_inequalities(c, r);
      return r;
    }
    case Experiment::all: {
      SummaryReport r;
      for (Experiment e : {Experiment::kernel_validate, Experiment::inequalities, Experiment::rates,
                           Experiment::heat_comparison, Experiment::degiorgi}) {
        ExperimentConfig sub = default_config(e);
        sub.output_dir = c.output_dir / to_string(e);
        r.merge(run_experiment(sub));
      }
      return r;
    }
  }
  throw ConfigError("unknown experiment");
}

}  // namespace

SummaryReport compare_landau_heat(const ExperimentConfig& config) {
  SummaryReport report;
  const SolverConfig base = sampled(config);
  const Grid g = make_grid(base.n, base.L);
  const ScalarField u0 = sample_preset(g, base.initial);

  SolverConfig landau_cfg = base, heat_cfg = base;
  landau_cfg.mode = Mode::landau_diffusion;
  heat_cfg.mode = Mode::heat_baseline;
  const Trajectory landau_traj = run(landau_cfg);
  const Trajectory heat_traj = run(heat_cfg);
  write_diagnostics_csv(landau_traj, config.output_dir / "diagnostics.csv");
  write_diagnostics_csv(heat_traj, config.output_dir / "diagnostics_heat.csv");
  report.add_file("diagnostics.csv");
  report.add_file("diagnostics_heat.csv");

  // Both fits share one window: the requested one clipped by either run.
  const FitWindow req = requested_window(config);
  const auto wl = clip_window(landau_traj, req, landau_traj.column("boundary_mass"), config.boundary_tol);
  const auto wh = clip_window(heat_traj, req, heat_traj.column("boundary_mass"), config.boundary_tol);
  if (!wl || !wh) throw std::runtime_error("heat comparison: window violates the boundary-mass rule");
  const FitWindow w{std::max(wl->t_a, wh->t_a), std::min(wl->t_b, wh->t_b)};
  if (!(w.t_a < w.t_b)) throw std::runtime_error("heat comparison: window violates the boundary-mass rule");

  json pairs = json::object();
  for (std::size_t q = 0; q < base.p_list.size(); ++q) {
    const double p = base.p_list[q];
    char key[32];
    std::snprintf(key, sizeof key, "lp%g", p);
    const RateFit fl = fit_decay_rate(landau_traj.times(), landau_traj.column(key), w);
    const RateFit fh = fit_decay_rate(heat_traj.times(), heat_traj.column(key), w);
    const double heat_theory = -(kDim / 2.0) * (1.0 - 1.0 / p);
    pairs[key] = {{"landau", fl.to_json()},
                  {"heat", fh.to_json()},
                  {"gap", fl.slope - fh.slope},
                  {"heat_exponent_theory", heat_theory},
                  {"gap_theory", (kDim / 2.0 - 1.0) * (1.0 - 1.0 / p)}};
    report.fits()[std::string("landau_") + key] = fl.to_json();
    report.fits()[std::string("heat_") + key] = fh.to_json();
  }
  index_of(base.p_list, 2.0, "p");
  const double sl = pairs["lp2"]["landau"]["slope"], sh = pairs["lp2"]["heat"]["slope"];
  const bool ok = sh <= config.heat.heat_slope_max && sl >= sh + config.heat.margin;
  json e = {{"slope_landau", sl},   {"slope_heat", sh},
            {"gap", sl - sh},       {"heat_slope_max", config.heat.heat_slope_max},
            {"margin", config.heat.margin}, {"window", window_json(w)}};
  report.record(7, ok, e);

  record_run_checks("landau", landau_traj, initial_floor(landau_cfg, u0), config, report, true);
  record_run_checks("heat", heat_traj, 0.0, config, report, false);
  detail::write_json(config.output_dir, "checks/heat_comparison.json",
                     {{"item7", e}, {"pairs", pairs}, {"item3", report.item(3).evidence}}, report);
  return report;
}

SummaryReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  fs::create_directories(config.output_dir);
  SummaryReport report;
  try {
    report = dispatch(config);
  } catch (const SolverAbort& e) {
    report.experiment = to_string(config.experiment);
    write_summary(config, report, std::string(e.what()));
    throw;
  }
  report.experiment = to_string(config.experiment);
  write_summary(config, report, std::nullopt);
  return report;
}

}  // namespace landau
