#include "landau/degiorgi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

#include "landau/functionals.hpp"

namespace landau {

DeGiorgiParams parameters(int d, double p, double m) {
  DeGiorgiParams r;
  r.d = d;
  r.p = p;
  r.m = m;
  if (d < 3) {
    r.reason = "d must be at least 3";
    return r;
  }
  const double dd = d;
  r.gamma = -1.0 + 2.0 * p / dd - 3.0 * (dd - 2.0) * (p - 1.0) / m;
  r.beta1 = 2.0 / dd - 3.0 * (dd - 2.0) / m;
  r.epsilon = (1.0 - 2.0 / dd) / (1.0 + r.gamma);
  const double base = 1.5 * dd * (dd - 2.0);
  if (!(p > 0.5 * dd)) {
    r.m_min = base;
    r.reason = "p must exceed d/2";
    return r;
  }
  r.m_min = base * std::max(1.0, (p - 1.0) / (p - 0.5 * dd));
  if (!(m > r.m_min)) {
    r.reason = "m must exceed m_min";
    return r;
  }
  r.valid = true;
  return r;
}

double LevelSchedule::level(int k) const { return M * (1.0 - std::ldexp(1.0, -k)); }
double LevelSchedule::gate(int k) const { return 0.5 * t * (1.0 - std::ldexp(1.0, -k)); }

LevelSchedule schedule(double M, double t, int K) {
  if (!(M > 0.0)) throw std::invalid_argument("schedule needs M > 0");
  if (!(t > 0.0)) throw std::invalid_argument("schedule needs t > 0");
  if (K < 1) throw std::invalid_argument("schedule needs K >= 1");
  LevelSchedule s{M, t, K, {}, {}};
  for (int k = 0; k <= K; ++k) {
    s.C.push_back(s.level(k));
    s.T.push_back(s.gate(k));
  }
  return s;
}

ScalarField truncate(const ScalarField& u, double c) {
  ScalarField out(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::max(u[i] - c, 0.0);
  return out;
}

double default_energy_constant(double p) { return 4.0 * (p - 1.0) / p; }

EnergyAccumulator::EnergyAccumulator(LevelSchedule sched, double p, double c_p)
    : sched_(std::move(sched)), p_(p), c_p_(c_p < 0.0 ? default_energy_constant(p) : c_p) {
  if (!(p > 1.0)) throw std::invalid_argument("level energies need p > 1");
  const std::size_t levels = sched_.K + 1;
  sup_.assign(levels, 0.0);
  grad_.assign(levels, 0.0);
  grad_A_.assign(levels, 0.0);
}

void EnergyAccumulator::add(double tau, double dtau, const ScalarField& u, const SymMatrixField* A) {
  const double t = sched_.t;
  if (!(tau > 0.25 * t) || tau > t) return;
  ++samples_;
  if (!A) all_have_A_ = false;
  constexpr double kD = kDim;
  for (int k = 0; k <= sched_.K; ++k) {
    if (!(tau > sched_.gate(k + 1))) break;  // gates increase with k
    const ScalarField trunc = truncate(u, sched_.level(k));
    sup_[k] = std::max(sup_[k], lp_power(trunc, p_));
    grad_[k] += weighted_grad_energy(positive_power(trunc, 0.5 * p_), -kD) * dtau;
    if (A) grad_A_[k] += dissipation(trunc, p_, *A) * dtau;
  }
}

EnergySeries EnergyAccumulator::finish() const {
  if (samples_ < 16)
    throw std::runtime_error("level energies need at least 16 samples in (t/4, t], got " + std::to_string(samples_));
  EnergySeries s;
  s.samples = samples_;
  for (int k = 0; k <= sched_.K; ++k) {
    s.sup_term.push_back(sup_[k]);
    s.grad_term.push_back(grad_[k]);
    s.E.push_back(sup_[k] + c_p_ * grad_[k]);
    if (all_have_A_) s.E_A.push_back(sup_[k] + c_p_ * grad_A_[k]);
  }
  return s;
}

EnergySeries energies(const std::vector<EnergySample>& samples, const LevelSchedule& sched, double p, double c_p) {
  EnergyAccumulator acc(sched, p, c_p);
  for (const auto& s : samples) acc.add(s.tau, s.dtau, s.u, s.A ? &*s.A : nullptr);
  return acc.finish();
}

std::optional<double> fit_growth_exponent(const std::vector<double>& E) {
  // Longest leading run of positive energies.
  std::size_t n = 0;
  while (n < E.size() && E[n] > 0.0) ++n;
  if (n < 3) return std::nullopt;
  std::vector<double> D;
  for (std::size_t k = 0; k + 1 < n; ++k) D.push_back(std::log(E[k + 1]) - std::log(E[k]));
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k + 1 < D.size(); ++k) {
    num += D[k] * D[k + 1];
    den += D[k] * D[k];
  }
  if (den == 0.0) return std::nullopt;
  return num / den;
}

RecursionReport recursion_report(const EnergySeries& series, const DeGiorgiParams& params, double M, double t) {
  if (!params.valid) throw std::invalid_argument("recursion_report needs valid parameters: " + params.reason);
  RecursionReport r;
  const double scale = t * std::pow(M, 1.0 + params.gamma);
  for (std::size_t k = 1; k < series.E.size(); ++k) {
    const double prev = series.E[k - 1];
    if (!(prev > 0.0)) continue;
    const double kappa = series.E[k] * scale / std::pow(prev, 1.0 + params.beta1);
    r.levels.push_back({static_cast<int>(k), prev, series.E[k], kappa});
    r.max_kappa = std::max(r.max_kappa, kappa);
  }
  if (!r.levels.empty()) r.growth_exponent = fit_growth_exponent(series.E);
  return r;
}

void write_degiorgi_csv(const EnergySeries& series, const RecursionReport& report, const LevelSchedule& sched,
                        const std::filesystem::path& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::fputs("k,C_k,T_k,E_k,kappa_k\n", f.get());
  for (std::size_t k = 0; k < series.E.size(); ++k) {
    std::fprintf(f.get(), "%zu,%.17g,%.17g,%.17g,", k, sched.level(static_cast<int>(k)),
                 sched.gate(static_cast<int>(k)), series.E[k]);
    for (const auto& lv : report.levels)
      if (lv.k == static_cast<int>(k)) std::fprintf(f.get(), "%.17g", lv.kappa);
    std::fputc('\n', f.get());
  }
}

}  // namespace landau
