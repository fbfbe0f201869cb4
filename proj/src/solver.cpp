#include "landau/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "landau/functionals.hpp"
#include "landau/snapshot.hpp"
#include "landau/sym3.hpp"

namespace landau {

void SolverConfig::validate() const {
  make_grid(n, L);
  if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("CFL safety must lie in (0, 1]");
  if (refresh_every < 1) throw std::invalid_argument("refresh_every must be >= 1");
  if (!(c_d > 0.0)) throw std::invalid_argument("c_d must be positive");
  if (!(dt_max > 0.0)) throw std::invalid_argument("dt_max must be positive");
  if (!(negativity_tol >= 0.0)) throw std::invalid_argument("negativity_tol must be >= 0");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (!(sample_times[i] > 0.0 && sample_times[i] <= T))
      throw std::invalid_argument("sample times must lie in (0, T]");
    if (i > 0 && !(sample_times[i] > sample_times[i - 1]))
      throw std::invalid_argument("sample times must be increasing");
  }
  for (double p : p_list)
    if (!(p > 1.0)) throw std::invalid_argument("configured p values must exceed 1");
  for (double m : m_list)
    if (!(m >= 0.0)) throw std::invalid_argument("configured moment exponents must be >= 0");
  if (!(poincare_p > 1.0)) throw std::invalid_argument("poincare_p must exceed 1");
}

// ---------------------------------------------------------------------------
// Spatial operator

namespace {

// Monotonised-central limiter of two one-sided differences.
double mc_limit(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  const double m = std::min({2.0 * std::abs(a), 2.0 * std::abs(b), 0.5 * std::abs(a + b)});
  return a > 0.0 ? m : -m;
}

}  // namespace

ScalarField apply_diffusion(const ScalarField& u, const SymMatrixField& A, CrossStencil stencil) {
  require_same_grid(u.grid(), A.grid);
  const Grid& g = u.grid();
  const int n = g.n;
  const std::size_t stride[3] = {1, static_cast<std::size_t>(n), static_cast<std::size_t>(n) * n};
  const double inv_h = 1.0 / g.h;

  // Forward differences u[idx + s] - u[idx], zero on the last cell of an axis.
  std::array<std::vector<double>, 3> fd;
  for (auto& c : fd) c.assign(g.size(), 0.0);
  for_each_cell(g, [&](int i, int j, int k, std::size_t idx) {
    const int pos[3] = {i, j, k};
    for (int a = 0; a < 3; ++a)
      if (pos[a] < n - 1) fd[a][idx] = u[idx + stride[a]] - u[idx];
  });

  // Transverse derivative along axis t at the face between idx and nb.
  auto transverse = [&](int t, std::size_t idx, std::size_t nb, int pos_t) {
    const std::size_t s = stride[t];
    const bool lo = pos_t > 0, hi = pos_t < n - 1;
    const double up0 = fd[t][idx], up1 = fd[t][nb];
    const double dn0 = lo ? fd[t][idx - s] : 0.0, dn1 = lo ? fd[t][nb - s] : 0.0;
    if (stencil == CrossStencil::limited) return mc_limit(mc_limit(up0, up1), mc_limit(dn0, dn1)) * inv_h;
    // Plain four-point average; one-sided on the outermost cells.
    if (!lo) return 0.5 * (up0 + up1) * inv_h;
    if (!hi) return 0.5 * (dn0 + dn1) * inv_h;
    return 0.25 * (up0 + up1 + dn0 + dn1) * inv_h;
  };

  // Row j of A as component indices.
  constexpr int row[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};

  ScalarField out(g);
  std::vector<double> flux(g.size());  // flux through the + face of each cell
  for (int j = 0; j < 3; ++j) {
    const std::size_t s = stride[j];
    const int t1 = (j + 1) % 3, t2 = (j + 2) % 3;
    for_each_cell(g, [&](int i, int jj, int k, std::size_t idx) {
      const int pos[3] = {i, jj, k};
      if (pos[j] == n - 1) {
        flux[idx] = 0.0;
        return;
      }
      const std::size_t nb = idx + s;
      const double ajj = 0.5 * (A.comp[row[j][j]][idx] + A.comp[row[j][j]][nb]);
      const double a1 = 0.5 * (A.comp[row[j][t1]][idx] + A.comp[row[j][t1]][nb]);
      const double a2 = 0.5 * (A.comp[row[j][t2]][idx] + A.comp[row[j][t2]][nb]);
      const double normal = (u[nb] - u[idx]) * inv_h;
      double f = ajj * normal;
      if (a1 != 0.0) f += a1 * transverse(t1, idx, nb, pos[t1]);
      if (a2 != 0.0) f += a2 * transverse(t2, idx, nb, pos[t2]);
      flux[idx] = f;
    });
    for_each_cell(g, [&](int i, int jj, int k, std::size_t idx) {
      const int pos[3] = {i, jj, k};
      const double minus = pos[j] == 0 ? 0.0 : flux[idx - s];
      out[idx] += (flux[idx] - minus) * inv_h;
    });
  }
  return out;
}

double cfl_dt(const SymMatrixField& A, double h, double sigma, double dt_max) {
  if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("CFL safety must lie in (0, 1]");
  const double lmax = max_eigenvalue(A);
  if (!(lmax > 0.0)) return dt_max;
  return std::min(dt_max, sigma * h * h / (2.0 * kDim * lmax));
}

// ---------------------------------------------------------------------------
// Solver

Solver::Solver(SolverConfig config)
    : config_((config.validate(), std::move(config))),
      grid_(make_grid(config_.n, config_.L)),
      table_(build_kernel_table(grid_, config_.c_d, KernelSet::matrix)),
      plan_(grid_),
      u_(sample_preset(grid_, config_.initial)) {}

void Solver::reset(const ScalarField& u0, double t0) {
  require_same_grid(u0.grid(), grid_);
  u_ = u0;
  t_ = t0;
  step_count_ = 0;
  frozen_.reset();
  primed_ = false;
}

void Solver::prime(SymMatrixField landau_A) {
  if (config_.mode != Mode::landau_diffusion) return;
  if (frozen_ && step_count_ % config_.refresh_every != 0) return;
  require_same_grid(landau_A.grid, grid_);
  frozen_ = std::move(landau_A);
  primed_ = true;
}

SymMatrixField Solver::coefficient(const ScalarField& u) {
  if (config_.mode == Mode::heat_baseline) return SymMatrixField::identity(u.grid());
  return compute_A(u, table_, plan_);
}

namespace {

std::filesystem::path dump_state(const SolverConfig& cfg, const ScalarField& u, double t) {
  const auto dir = cfg.snapshot_dir.value_or(std::filesystem::temp_directory_path());
  std::ostringstream name;
  name << "abort_state_t" << t << ".bin";
  const auto path = dir / name.str();
  try {
    save_snapshot(u, path, t, "abort_state");
  } catch (const std::exception&) {
    return {};
  }
  return path;
}

}  // namespace

StepReport Solver::step(double dt_cap) {
  const bool landau = config_.mode == Mode::landau_diffusion;
  const bool refresh = !frozen_ || (landau && step_count_ % config_.refresh_every == 0);
  if (refresh && !primed_) frozen_ = coefficient(u_);
  if (refresh || primed_) frozen_dt_ = cfl_dt(*frozen_, grid_.h, config_.cfl, config_.dt_max);
  primed_ = false;
  const SymMatrixField& A = *frozen_;
  const double dt = std::min(dt_cap, frozen_dt_);

  const double mass0 = pairwise_sum(u_.values());
  ScalarField k1 = apply_diffusion(u_, A, config_.cross_stencil);
  ScalarField mid = u_;
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] += 0.5 * dt * k1[i];
  ScalarField k2 = apply_diffusion(mid, A, config_.cross_stencil);
  ScalarField next = u_;
  for (std::size_t i = 0; i < next.size(); ++i) next[i] += dt * k2[i];

  if (!next.all_finite()) {
    const auto dump = dump_state(config_, u_, t_);
    throw SolverAbort("non-finite value after step at t=" + std::to_string(t_), dump);
  }
  const double min_value = next.min_value();
  const double scale = linf_norm(next);
  if (min_value < -config_.negativity_tol * scale) {
    const auto dump = dump_state(config_, u_, t_);
    throw SolverAbort("negativity breach (CFL failure): min u = " + std::to_string(min_value) +
                          " at t=" + std::to_string(t_ + dt),
                      dump);
  }

  u_ = std::move(next);
  t_ += dt;
  ++step_count_;
  const double mass1 = pairwise_sum(u_.values());
  return {dt, min_value, mass0 != 0.0 ? (mass1 - mass0) / mass0 : mass1};
}

DiagnosticsRecord Solver::diagnostics(const SymMatrixField& landau_A) const {
  DiagnosticsRecord r;
  r.t = t_;
  r.mass = integrate(u_);
  r.entropy = entropy(u_);
  for (double p : config_.p_list) r.lp.push_back(lp_norm(u_, p));
  r.linf = linf_norm(u_);
  for (double m : config_.m_list) r.l1m.push_back(weighted_l1m(u_, m));
  const SymMatrixField identity =
      config_.mode == Mode::heat_baseline ? SymMatrixField::identity(grid_) : SymMatrixField{};
  const SymMatrixField& coeff = config_.mode == Mode::heat_baseline ? identity : landau_A;
  for (double p : config_.p_list) r.dissipation.push_back(dissipation(u_, p, coeff));
  const double sweep[1] = {config_.c_d};
  r.poincare_ratio = check_poincare_gks(u_, config_.poincare_p, landau_A, table_.c_d, sweep).front().ratio;
  r.ellipticity_floor = ellipticity_profile(landau_A).floor;
  r.min_u = u_.min_value();
  r.boundary_mass = boundary_mass_fraction(u_, std::min(4, grid_.n / 4 - 1));
  return r;
}

// ---------------------------------------------------------------------------
// Driver

Trajectory run(const SolverConfig& config, const SampleObserver& observer) {
  Solver solver(config);
  Trajectory traj;
  traj.p_list = config.p_list;
  traj.m_list = config.m_list;
  traj.initial_mass = integrate(solver.state());

  std::vector<double> samples = config.sample_times;
  if (samples.empty() || samples.back() < config.T) samples.push_back(config.T);
  std::size_t next = 0;
  double last_dt = 0.0;

  auto record = [&] {
    if (!traj.records.empty() && traj.records.back().t >= solver.time()) return;
    SymMatrixField A = compute_A(solver.state(), solver.table(), solver.plan());
    DiagnosticsRecord r = solver.diagnostics(A);
    r.dt = last_dt;
    if (config.snapshot_dir) {
      std::ostringstream name;
      name << "u_" << traj.records.size() << ".bin";
      const auto path = *config.snapshot_dir / name.str();
      save_snapshot(solver.state(), path, r.t, "u");
      traj.snapshots.push_back(path);
    }
    if (observer) observer(r, solver.state());
    traj.records.push_back(std::move(r));
    solver.prime(std::move(A));
  };

  while (solver.time() < config.T) {
    const double t0 = solver.time();
    const StepReport rep = solver.step(config.T - t0);
    if (traj.steps == 0) traj.first_dt = rep.dt;
    ++traj.steps;
    last_dt = rep.dt;
    const double t1 = solver.time();
    // Nearest-step sampling: a sample closer to the previous step than to
    // this one was already passed; record it here anyway unless the previous
    // step (t0 > 0) already produced a record.
    while (next < samples.size() && samples[next] <= t1 * (1.0 + 1e-12)) {
      const bool prev_nearer = samples[next] - t0 < t1 - samples[next];
      if (!(prev_nearer && t0 > 0.0 && !traj.records.empty() && traj.records.back().t == t0)) record();
      ++next;
    }
    // A sample lying nearer to t1 than to the following step is taken now.
    if (next < samples.size() && solver.time() < config.T) {
      const double guess = t1 + rep.dt;
      if (samples[next] < guess && samples[next] - t1 < guess - samples[next]) {
        record();
        ++next;
      }
    }
    if (config.T - solver.time() <= 1e-12 * config.T) break;
  }
  if (traj.records.empty() || traj.records.back().t < solver.time()) record();
  return traj;
}

// ---------------------------------------------------------------------------
// Trajectory helpers

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  for (const auto& r : records) t.push_back(r.t);
  return t;
}

namespace {

std::string fmt_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::vector<double> Trajectory::column(const std::string& name) const {
  std::vector<double> out;
  auto pick = [&](auto&& get) {
    for (const auto& r : records) out.push_back(get(r));
    return out;
  };
  if (name == "t") return pick([](const DiagnosticsRecord& r) { return r.t; });
  if (name == "mass") return pick([](const DiagnosticsRecord& r) { return r.mass; });
  if (name == "entropy") return pick([](const DiagnosticsRecord& r) { return r.entropy; });
  if (name == "linf") return pick([](const DiagnosticsRecord& r) { return r.linf; });
  if (name == "poincare_ratio") return pick([](const DiagnosticsRecord& r) { return r.poincare_ratio; });
  if (name == "ellipticity_floor") return pick([](const DiagnosticsRecord& r) { return r.ellipticity_floor; });
  if (name == "min_u") return pick([](const DiagnosticsRecord& r) { return r.min_u; });
  if (name == "dt") return pick([](const DiagnosticsRecord& r) { return r.dt; });
  if (name == "boundary_mass") return pick([](const DiagnosticsRecord& r) { return r.boundary_mass; });
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    if (name == "lp" + fmt_param(p_list[i])) return pick([i](const DiagnosticsRecord& r) { return r.lp[i]; });
    if (name == "diss" + fmt_param(p_list[i]))
      return pick([i](const DiagnosticsRecord& r) { return r.dissipation[i]; });
  }
  for (std::size_t i = 0; i < m_list.size(); ++i)
    if (name == "l1m" + fmt_param(m_list[i])) return pick([i](const DiagnosticsRecord& r) { return r.l1m[i]; });
  throw std::invalid_argument("unknown diagnostics column " + name);
}

std::string diagnostics_header(const Trajectory& traj) {
  std::string h = "t,mass,entropy";
  for (double p : traj.p_list) h += ",lp" + fmt_param(p);
  h += ",linf";
  for (double m : traj.m_list) h += ",l1m" + fmt_param(m);
  for (double p : traj.p_list) h += ",diss" + fmt_param(p);
  h += ",poincare_ratio,ellipticity_floor,min_u,dt";
  return h;
}

void write_diagnostics_csv(const Trajectory& traj, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << diagnostics_header(traj) << '\n';
  char buf[40];
  auto put = [&](double v, bool first = false) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!first) out << ',';
    out << buf;
  };
  for (const auto& r : traj.records) {
    put(r.t, true);
    put(r.mass);
    put(r.entropy);
    for (double v : r.lp) put(v);
    put(r.linf);
    for (double v : r.l1m) put(v);
    for (double v : r.dissipation) put(v);
    put(r.poincare_ratio);
    put(r.ellipticity_floor);
    put(r.min_u);
    put(r.dt);
    out << '\n';
  }
}

std::vector<double> log_spaced_times(double t_first, double T, int per_decade) {
  if (!(t_first > 0.0 && t_first <= T) || per_decade < 1) throw std::invalid_argument("bad log spacing");
  std::vector<double> out;
  const double step = std::log10(T / t_first) ;
  const int count = static_cast<int>(std::floor(step * per_decade + 1e-9));
  for (int i = 0; i <= count; ++i) out.push_back(t_first * std::pow(10.0, static_cast<double>(i) / per_decade));
  if (out.back() < T * (1.0 - 1e-12)) out.push_back(T);
  else out.back() = T;
  return out;
}

// ---------------------------------------------------------------------------
// Envelopes

double theoretical_lp_envelope(double p, double mass, double t) {
  if (!(p > 1.0)) throw std::invalid_argument("envelope needs p > 1");
  if (!(t > 0.0)) throw std::invalid_argument("envelope needs t > 0");
  const double C = 4.0 * p * (p - 1.0) / ((p + 1.0) * (p + 1.0)) * std::pow(mass, -1.0 / (p - 1.0));
  const double e = 1.0 - 1.0 / p;
  return std::pow((p - 1.0) / C, e) * std::pow(t, -e);
}

namespace {

template <class F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate_adaptive(F&& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 50);
}

}  // namespace

double moment_envelope(double y0, double t, double c, double C) {
  if (!(t >= 0.0)) throw std::invalid_argument("moment envelope needs t >= 0");
  constexpr double d = kDim;
  // With s = v^d the forcing integral int_0^t e^{-c d s^{1/d}} s^{-(d-2)/d} ds
  // becomes int_0^{t^{1/d}} d v e^{-c d v} dv, which has a smooth integrand.
  const double V = std::pow(t, 1.0 / d);
  const double forcing = integrate_adaptive([&](double v) { return d * v * std::exp(-c * d * v); }, 0.0, V,
                                            1e-14 * std::max(1.0, d * V * V));
  return std::exp(c * d * V) * (y0 + C * forcing);
}

}  // namespace landau
