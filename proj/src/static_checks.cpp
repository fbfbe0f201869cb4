// Checks that need no time integration: kernel validation (items 1, 2) and
// the functional inequalities (items 4, 5, 11).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "harness_detail.hpp"
#include "landau/degiorgi.hpp"
#include "landau/functionals.hpp"
#include "landau/gaussian_reference.hpp"

namespace landau::detail {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Frobenius norm of a symmetric matrix stored as (11, 22, 33, 12, 13, 23).
double frobenius(const std::array<double, 6>& a) {
  return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + 2.0 * (a[3] * a[3] + a[4] * a[4] + a[5] * a[5]));
}

double relative_gap(const std::array<double, 6>& a, const std::array<double, 6>& ref) {
  std::array<double, 6> diff;
  for (int c = 0; c < 6; ++c) diff[c] = a[c] - ref[c];
  return frobenius(diff) / frobenius(ref);
}

std::size_t nearest_cell(const Grid& g, const Point3& x) {
  int idx[3];
  for (int a = 0; a < 3; ++a)
    idx[a] = std::clamp(static_cast<int>(std::floor((x[a] + 0.5 * g.L) / g.h)), 0, g.n - 1);
  return g.index(idx[0], idx[1], idx[2]);
}

Point3 cell_position(const Grid& g, std::size_t flat) {
  const int i = static_cast<int>(flat % g.n);
  const int j = static_cast<int>((flat / g.n) % g.n);
  const int k = static_cast<int>(flat / (static_cast<std::size_t>(g.n) * g.n));
  return g.position(i, j, k);
}

// Uniform points in the ball of radius r, by rejection from the cube.
std::vector<Point3> random_points(std::uint64_t seed, int count, double r) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-r, r);
  std::vector<Point3> out;
  while (static_cast<int>(out.size()) < count) {
    const Point3 x{coord(rng), coord(rng), coord(rng)};
    if (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] <= r * r) out.push_back(x);
  }
  return out;
}

// Largest relative error of the spectral A against the closed form at the
// cells nearest to `points`.
double analytic_error(int n, const KernelSettings& k, const std::vector<Point3>& points) {
  const Grid g = make_grid(n, k.L);
  const ScalarField u = sample_preset(g, preset::Gaussian{k.mass, k.sigma, {0.0, 0.0, 0.0}});
  const KernelTable table = build_kernel_table(g, kDefaultCd, KernelSet::matrix);
  ConvolutionPlan plan(g);
  const SymMatrixField A = compute_A(u, table, plan);
  const GaussianReference ref{k.mass, k.sigma};
  double worst = 0.0;
  for (const auto& x : points) {
    const std::size_t c = nearest_cell(g, x);
    worst = std::max(worst, relative_gap(A.at(c), ref.A(cell_position(g, c), kDefaultCd)));
  }
  return worst;
}

double l2_norm(const VectorField& v) {
  double s = 0.0;
  for (const auto& c : v.comp)
    for (double x : c) s += x * x;
  return std::sqrt(s);
}

double l2_gap(const VectorField& a, const VectorField& b) {
  double s = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.comp[c].size(); ++i) s += (a.comp[c][i] - b.comp[c][i]) * (a.comp[c][i] - b.comp[c][i]);
  return std::sqrt(s);
}

// Divergence of a symmetric matrix field, column by column, with the same
// difference stencils as `gradient`.
VectorField fd_divergence(const SymMatrixField& A) {
  static constexpr int kCol[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
  VectorField out(A.grid);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const VectorField g = gradient(ScalarField(A.grid, A.comp[kCol[i][j]]));
      for (std::size_t c = 0; c < out.comp[i].size(); ++c) out.comp[i][c] += g.comp[j][c];
    }
  return out;
}

void kernel_oracle_item(const KernelSettings& k, SummaryReport& report, json& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto points = random_points(k.seed, k.cells, k.cell_radius);

  const Grid g = make_grid(k.n, k.L);
  const ScalarField u = sample_preset(g, preset::Gaussian{k.mass, k.sigma, {0.0, 0.0, 0.0}});
  const KernelTable table = build_kernel_table(g, kDefaultCd, KernelSet::matrix);
  ConvolutionPlan plan(g);
  const SymMatrixField A = compute_A(u, table, plan);
  std::vector<std::size_t> cells;
  for (const auto& x : points) cells.push_back(nearest_cell(g, x));
  const auto oracle = quadrature_oracle_A(u, cells, kDefaultCd);
  double oracle_err = 0.0;
  json per_cell = json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const double e = relative_gap(A.at(cells[i]), oracle[i]);
    oracle_err = std::max(oracle_err, e);
    per_cell.push_back({{"cell", cells[i]}, {"x", cell_position(g, cells[i])}, {"rel_error", e}});
  }

  const double e_coarse = analytic_error(k.n, k, points);
  const double e_fine = analytic_error(k.refine_n, k, points);
  const double order = std::log(e_coarse / e_fine) / std::log(static_cast<double>(k.refine_n) / k.n);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const bool ok = oracle_err <= k.oracle_tol && order >= k.min_order && seconds <= 120.0;
  json e = {{"n", k.n},
            {"oracle_max_rel_error", oracle_err},
            {"oracle_tol", k.oracle_tol},
            {"analytic_error", {{std::to_string(k.n), e_coarse}, {std::to_string(k.refine_n), e_fine}}},
            {"order", order},
            {"min_order", k.min_order},
            {"seconds", seconds}};
  report.record(1, ok, e);
  out["oracle"] = e;
  out["oracle"]["cells"] = per_cell;
}

void structural_item(const KernelSettings& k, SummaryReport& report, json& out) {
  const Grid g = make_grid(k.n, k.L);
  const KernelTable table = build_kernel_table(g, kDefaultCd, KernelSet::all);
  ConvolutionPlan plan(g);

  const std::vector<std::pair<std::string, Preset>> inputs = {
      {"gaussian", preset::Gaussian{k.mass, k.sigma, {0.0, 0.0, 0.0}}},
      {"random_bumps_1", preset::RandomBumps{1, 3}},
      {"random_bumps_2", preset::RandomBumps{2, 4}},
      {"anisotropic", preset::AnisotropicGaussian{1.0, {0.6, 1.0, 1.6}, {0.5, -0.3, 0.0}}},
      {"spike", preset::Spike{1.0, 3.0}},
  };
  double trace_err = 0.0, psd = kInf;
  json cases = json::array();
  for (const auto& [name, p] : inputs) {
    const ScalarField u = sample_preset(g, p);
    const SymMatrixField A = compute_A(u, table, plan);
    const ScalarField N = newtonian_potential(u, table, plan);
    double worst = 0.0, scale = 0.0;
    for (std::size_t c = 0; c < u.size(); ++c) {
      const double target = (kDim - 1) * kDefaultCd * N[c];
      worst = std::max(worst, std::abs(A.comp[0][c] + A.comp[1][c] + A.comp[2][c] - target));
      scale = std::max(scale, std::abs(target));
    }
    const double ratio = min_eigen_ratio(A);
    trace_err = std::max(trace_err, worst / scale);
    psd = std::min(psd, ratio);
    cases.push_back({{"input", name}, {"trace_rel_error", worst / scale}, {"min_eigen_ratio", ratio}});
  }

  // The matrix kernel is even: samples at z and -z agree bit for bit.
  bool even = true;
  const double r_eff = effective_radius(g.h);
  for (const auto& z : random_points(k.seed + 1, 200, k.L)) {
    const auto a = sample_kernels(z[0], z[1], z[2], r_eff).matrix;
    const auto b = sample_kernels(-z[0], -z[1], -z[2], r_eff).matrix;
    even = even && a == b;
  }

  // Divergence identity on a finer grid with a wider Gaussian: the spectral
  // div A, the difference divergence of A and 2 c_d grad N must agree.
  const Grid gd = make_grid(k.div_n, k.div_L);
  const KernelTable td = build_kernel_table(gd, kDefaultCd, KernelSet::all);
  ConvolutionPlan pd(gd);
  const ScalarField ud = sample_preset(gd, preset::Gaussian{k.mass, k.div_sigma, {0.0, 0.0, 0.0}});
  const VectorField spectral = compute_divA(ud, td, pd);
  const VectorField from_A = fd_divergence(compute_A(ud, td, pd));
  VectorField from_N = gradient(newtonian_potential(ud, td, pd));
  for (auto& c : from_N.comp)
    for (double& x : c) x *= (kDim - 1) * kDefaultCd;
  const double norm = l2_norm(spectral);
  const double div_A_err = l2_gap(spectral, from_A) / norm;
  const double div_N_err = l2_gap(spectral, from_N) / norm;

  const bool ok = trace_err <= 1e-10 && div_A_err <= 1e-3 && div_N_err <= 1e-3 && even && psd >= -1e-12;
  json e = {{"trace_rel_error", trace_err},
            {"divergence_rel_l2", {{"fd_div_A", div_A_err}, {"grad_newtonian", div_N_err}}},
            {"divergence_grid", {{"n", k.div_n}, {"L", k.div_L}, {"sigma", k.div_sigma}}},
            {"symmetric_storage", true},
            {"kernel_even", even},
            {"min_eigen_ratio", psd}};
  report.record(2, ok, e);
  out["structural"] = e;
  out["structural"]["cases"] = cases;
}

// Lemma 2.1 ratios of a centred Gaussian on a fixed grid.
std::pair<double, double> lemma21_pair(const Grid& g, const KernelTable& table, ConvolutionPlan& plan, double mass,
                                       double sigma, const InequalitySettings& s) {
  const ScalarField u = sample_preset(g, preset::Gaussian{mass, sigma, {0.0, 0.0, 0.0}});
  const SymMatrixField A = compute_A(u, table, plan);
  const VectorField divA = compute_divA(u, table, plan);
  return {lemma21_A_ratio(u, s.lemma_p_A, A).ratio, lemma21_divA_ratio(u, s.lemma_p_divA, divA).ratio};
}

void homogeneity_item(const InequalitySettings& s, SummaryReport& report, json& out) {
  const Grid g = make_grid(s.dilation_n, s.L);
  const KernelTable table = build_kernel_table(g, kDefaultCd, KernelSet::matrix | KernelSet::gradient);
  ConvolutionPlan plan(g);
  const double sigma = s.dilation_sigma;
  const auto [rA, rD] = lemma21_pair(g, table, plan, 1.0, sigma, s);
  const auto [mA, mD] = lemma21_pair(g, table, plan, s.mass_scale, sigma, s);
  const double mass_dev = std::max(std::abs(mA / rA - 1.0), std::abs(mD / rD - 1.0));
  double dil_dev = 0.0;
  json dil = json::array();
  for (double lambda : s.dilations) {
    // u(x / lambda) carries lambda^d times the mass.
    const auto [a, d] = lemma21_pair(g, table, plan, std::pow(lambda, kDim), lambda * sigma, s);
    const double dev = std::max(std::abs(a / rA - 1.0), std::abs(d / rD - 1.0));
    dil_dev = std::max(dil_dev, dev);
    dil.push_back({{"lambda", lambda}, {"ratio_A", a}, {"ratio_divA", d}, {"deviation", dev}});
  }
  const bool ok = mass_dev <= 1e-10 && dil_dev <= 0.02;
  json e = {{"n", s.dilation_n},        {"ratio_A", rA},         {"ratio_divA", rD},
            {"mass_scale", s.mass_scale}, {"mass_deviation", mass_dev}, {"dilation_deviation", dil_dev},
            {"dilations", dil}};
  report.record(4, ok, e);
  out = e;
}

void interpolation_item(const InequalitySettings& s, SummaryReport& report, json& star, json& full) {
  const Grid g = make_grid(s.n, s.L);
  std::vector<double> sup_star(s.pq.size(), 0.0), sup_full(s.pq.size(), 0.0);
  double trunc_excess = -kInf;
  json rows = json::array();
  for (int i = 0; i < s.family_size; ++i) {
    const ScalarField u = random_family_member(g, s.family_seed + static_cast<std::uint64_t>(i));
    for (std::size_t q = 0; q < s.pq.size(); ++q) {
      const auto [p, qq] = s.pq[q];
      const InequalityReport r = check_interpolation_star(u, p, qq);
      const InequalityReport f = check_interpolation_full(u, p, qq);
      sup_star[q] = std::max(sup_star[q], r.ratio);
      sup_full[q] = std::max(sup_full[q], f.ratio);
      rows.push_back({{"member", i}, {"p", p}, {"q", qq}, {"star_ratio", r.ratio}, {"full_ratio", f.ratio}});
    }
    // Pointwise truncation step between consecutive dyadic levels.
    const LevelSchedule sched = schedule(linf_norm(u), 1.0, 8);
    for (int k = 1; k <= sched.K; ++k) {
      const double step = sched.C[k] - sched.C[k - 1];
      for (double a : s.truncation_a)
        for (std::size_t c = 0; c < u.size(); ++c) {
          const double lhs = std::max(u[c] - sched.C[k], 0.0);
          const double rhs = std::pow(std::max(u[c] - sched.C[k - 1], 0.0), 1.0 + a) / std::pow(step, a);
          trunc_excess = std::max(trunc_excess, (lhs - rhs) / std::max({lhs, rhs, std::numeric_limits<double>::min()}));
        }
    }
  }
  bool ok = trunc_excess <= 1e-13;
  json pq = json::array();
  for (std::size_t q = 0; q < s.pq.size(); ++q) {
    ok = ok && sup_star[q] <= 1.0 + 1e-6;
    pq.push_back({{"p", s.pq[q][0]}, {"q", s.pq[q][1]}, {"sup_ratio", sup_star[q]}});
    char key[48];
    std::snprintf(key, sizeof key, "interpolation_star_p%g_q%g", s.pq[q][0], s.pq[q][1]);
    report.suprema()[key] = sup_star[q];
    std::snprintf(key, sizeof key, "interpolation_full_p%g_q%g", s.pq[q][0], s.pq[q][1]);
    report.suprema()[key] = sup_full[q];
  }
  json e = {{"family_size", s.family_size}, {"pairs", pq}, {"truncation_worst_relative_excess", trunc_excess},
            {"truncation_a", s.truncation_a}};
  report.record(5, ok, e);
  star = e;
  full = {{"note", "empirical constants; not gated"}, {"members", rows}};
}

// Continuum ratio for a Gaussian by radial quadrature with the closed-form
// psi''; independent of mass and width.
double oracle_poincare_ratio(double p, double c_d) {
  const GaussianReference ref{1.0, 1.0};
  const double norm = std::pow(2.0 * std::numbers::pi, -1.5);
  const int steps = 200000;
  const double R = 14.0, dr = R / steps;
  double lhs = 0.0, rhs = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double r = (i + 0.5) * dr;
    const double u = norm * std::exp(-0.5 * r * r);
    const double dw = -0.5 * p * r * std::pow(u, 0.5 * p);  // d/dr u^{p/2}
    lhs += std::pow(u, p + 1.0) * r * r;
    rhs += ref.psi_second(r) * dw * dw * r * r;
  }
  return lhs / (std::pow((p + 1.0) / p, 2) * c_d * rhs);
}

void poincare_item(const InequalitySettings& s, SummaryReport& report, json& out) {
  std::vector<double> sweep = s.c_d_sweep;
  std::sort(sweep.begin(), sweep.end());
  json oracle = json::array();
  std::optional<double> calibrated;
  for (double c : sweep) {
    const double r = oracle_poincare_ratio(s.poincare_p, c);
    oracle.push_back({{"c_d", c}, {"ratio", r}});
    if (!calibrated && r <= 1.0) calibrated = c;
  }

  const Grid g = make_grid(s.n, s.L);
  const KernelTable table = build_kernel_table(g, kDefaultCd, KernelSet::matrix);
  ConvolutionPlan plan(g);
  double mass_dev = 0.0, scaling_dev = 0.0, sup_at_cal = 0.0;
  bool decreasing = true;
  json rows = json::array();
  for (double sigma : s.poincare_sigmas) {
    std::vector<double> first;
    for (double mass : s.poincare_masses) {
      const ScalarField u = sample_preset(g, preset::Gaussian{mass, sigma, {0.0, 0.0, 0.0}});
      const auto reps = check_poincare_gks(u, s.poincare_p, compute_A(u, table, plan), kDefaultCd, sweep);
      json ratios = json::array();
      for (std::size_t i = 0; i < reps.size(); ++i) {
        const double r = reps[i].ratio;
        ratios.push_back(r);
        if (first.size() < reps.size())
          first.push_back(r);
        else
          mass_dev = std::max(mass_dev, std::abs(r / first[i] - 1.0));
        scaling_dev = std::max(scaling_dev, std::abs(r * sweep[i] / (reps[0].ratio * sweep[0]) - 1.0));
        if (i > 0) decreasing = decreasing && r < reps[i - 1].ratio;
        if (calibrated && sweep[i] == *calibrated) sup_at_cal = std::max(sup_at_cal, r);
      }
      rows.push_back({{"mass", mass}, {"sigma", sigma}, {"ratios", ratios}});
    }
  }
  const bool ok = mass_dev <= 1e-12 && scaling_dev <= 1e-12 && decreasing && calibrated && sup_at_cal <= 1.0;
  report.suprema()["poincare_at_calibrated"] = sup_at_cal;
  json e = {{"p", s.poincare_p},
            {"c_d_sweep", sweep},
            {"oracle", oracle},
            {"calibrated_c_d", calibrated ? json(*calibrated) : json(nullptr)},
            {"sup_ratio_at_calibrated", sup_at_cal},
            {"mass_deviation", mass_dev},
            {"inverse_c_d_deviation", scaling_dev},
            {"decreasing_in_c_d", decreasing}};
  report.record(11, ok, e);
  out = e;
  out["family"] = rows;
}

json sobolev_table(const InequalitySettings& s, SummaryReport& report) {
  json grids = json::array();
  for (int n : {s.n, s.sobolev_refine_n}) {
    const Grid g = make_grid(n, s.L);
    double sup = 0.0;
    json members = json::array();
    for (int i = 0; i < s.sobolev_family; ++i) {
      const ScalarField f = random_family_member(g, s.family_seed + static_cast<std::uint64_t>(i));
      const InequalityReport r = check_weighted_sobolev(f, s.sobolev_s);
      sup = std::max(sup, r.ratio);
      members.push_back(r.ratio);
    }
    report.suprema()["weighted_sobolev_n" + std::to_string(n)] = sup;
    grids.push_back({{"n", n}, {"sup_constant", sup}, {"constants", members}});
  }
  return {{"s", s.sobolev_s}, {"note", "empirical constants; not gated"}, {"grids", grids}};
}

}  // namespace

void validate_kernel(const ExperimentConfig& config, SummaryReport& report) {
  json out = json::object();
  kernel_oracle_item(config.kernel, report, out);
  structural_item(config.kernel, report, out);
  write_json(config.output_dir, "checks/kernel_oracle.json", out["oracle"], report);
  write_json(config.output_dir, "checks/structural.json", out["structural"], report);
}

void check_inequalities(const ExperimentConfig& config, SummaryReport& report) {
  const InequalitySettings& s = config.inequalities;
  json lemma, star, full, poincare;
  homogeneity_item(s, report, lemma);
  interpolation_item(s, report, star, full);
  poincare_item(s, report, poincare);
  write_json(config.output_dir, "checks/lemma21.json", lemma, report);
  write_json(config.output_dir, "checks/interpolation_star.json", star, report);
  write_json(config.output_dir, "checks/interpolation_full.json", full, report);
  write_json(config.output_dir, "checks/poincare.json", poincare, report);
  write_json(config.output_dir, "checks/sobolev.json", sobolev_table(s, report), report);
}

}  // namespace landau::detail
