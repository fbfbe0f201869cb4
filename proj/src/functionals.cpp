#include "landau/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "landau/sym3.hpp"

namespace landau {
namespace {

constexpr double kD = kDim;

template <class F>
double weighted_sum(const Grid& g, F&& term) {
  std::vector<double> buf(g.size());
  for_each_cell(g, [&](int i, int j, int k, std::size_t idx) { buf[idx] = term(i, j, k, idx); });
  return pairwise_sum(buf) * g.cell_volume();
}

// (sum |u|^p <x>^w h^3), the un-rooted weighted p-th power sum.
double power_sum(const ScalarField& u, double p, double w = 0.0) {
  const Grid& g = u.grid();
  return weighted_sum(g, [&](int i, int j, int k, std::size_t idx) {
    const double a = std::abs(u[idx]);
    if (a == 0.0) return 0.0;
    const double v = p == 1.0 ? a : std::pow(a, p);
    return w == 0.0 ? v : v * std::pow(g.bracket(i, j, k), w);
  });
}

void require_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
}

}  // namespace

double lp_power(const ScalarField& u, double p) {
  require_p(p);
  return power_sum(u, p);
}

double lp_norm(const ScalarField& u, double p) {
  require_p(p);
  return std::pow(power_sum(u, p), 1.0 / p);
}

double linf_norm(const ScalarField& u) {
  double m = 0.0;
  for (double v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

double weighted_l1m(const ScalarField& u, double m) {
  if (!(m >= 0.0)) throw std::invalid_argument("moment exponent must be >= 0");
  return power_sum(u, 1.0, m);
}

double entropy(const ScalarField& u) {
  return weighted_sum(u.grid(), [&](int, int, int, std::size_t idx) {
    const double v = u[idx];
    return v > 0.0 ? v * std::log(v) : 0.0;
  });
}

ScalarField positive_power(const ScalarField& f, double e) {
  ScalarField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = f[i];
    out[i] = v > 0.0 ? std::pow(v, e) : 0.0;
  }
  return out;
}

double dissipation(const ScalarField& u, double p, const SymMatrixField& A) {
  if (!(p > 1.0)) throw std::invalid_argument("dissipation needs p > 1");
  require_same_grid(u.grid(), A.grid);
  const VectorField gw = gradient(positive_power(u, 0.5 * p));
  return weighted_sum(u.grid(), [&](int, int, int, std::size_t idx) {
    const double g0 = gw.comp[0][idx], g1 = gw.comp[1][idx], g2 = gw.comp[2][idx];
    const auto a = A.at(idx);
    return a[0] * g0 * g0 + a[1] * g1 * g1 + a[2] * g2 * g2 +
           2.0 * (a[3] * g0 * g1 + a[4] * g0 * g2 + a[5] * g1 * g2);
  });
}

double weighted_grad_energy(const ScalarField& f, double weight_exponent) {
  const Grid& g = f.grid();
  const VectorField gf = gradient(f);
  return weighted_sum(g, [&](int i, int j, int k, std::size_t idx) {
    const double n = gf.norm_at(idx);
    return n * n * std::pow(g.bracket(i, j, k), weight_exponent);
  });
}

nlohmann::json InequalityReport::to_json() const {
  auto finite_or_null = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::json j = {{"name", name},
                      {"lhs", finite_or_null(lhs)},
                      {"rhs", finite_or_null(rhs)},
                      {"ratio", finite_or_null(ratio)},
                      {"threshold", threshold},
                      {"pass", pass},
                      {"params", params}};
  if (worst_case) j["worst_case"] = *worst_case;
  return j;
}

InequalityReport make_report(std::string name, double lhs, double rhs, double threshold,
                             std::map<std::string, double> params) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.threshold = threshold;
  r.params = std::move(params);
  if (lhs == 0.0) {
    r.ratio = 0.0;
  } else if (rhs == 0.0) {
    r.ratio = std::numeric_limits<double>::infinity();
  } else {
    r.ratio = lhs / rhs;
  }
  r.pass = std::isfinite(r.ratio) && r.ratio <= threshold;
  return r;
}

std::vector<InequalityReport> check_poincare_gks(const ScalarField& u, double p, const SymMatrixField& A, double c_ref,
                                                 std::span<const double> sweep) {
  if (!(p > 1.0)) throw std::invalid_argument("Poincare check needs p > 1");
  if (!(c_ref > 0.0)) throw std::invalid_argument("reference c_d must be positive");
  const double lhs = power_sum(u, p + 1.0);
  const double constant = std::pow((p + 1.0) / p, 2);
  const double diss_ref = dissipation(u, p, A);
  std::vector<InequalityReport> out;
  for (double c : sweep) {
    if (!(c > 0.0)) throw std::invalid_argument("c_d sweep values must be positive");
    const double rhs = constant * diss_ref * (c / c_ref);
    out.push_back(make_report("poincare_gks", lhs, rhs, 1.0, {{"p", p}, {"c_d", c}}));
  }
  return out;
}

InequalityReport check_weighted_sobolev(const ScalarField& f, double s) {
  const double crit = 2.0 * kD / (kD - 2.0);
  if (!(s >= 1.0 && s <= crit)) throw std::invalid_argument("Sobolev exponent s must lie in [1, 2d/(d-2)]");
  const double lhs = std::pow(power_sum(f, crit, -3.0 * kD), (kD - 2.0) / kD);
  const double grad = weighted_grad_energy(f, -kD);
  const double ls = std::pow(power_sum(f, s), 2.0 / s);
  return make_report("weighted_sobolev", lhs, grad + ls, std::numeric_limits<double>::infinity(),
                     {{"s", s}, {"grad", grad}, {"ls", ls}});
}

double interpolation_moment(double p, double q) {
  if (!(p > 1.0)) throw std::invalid_argument("interpolation needs p > 1");
  if (!(q > p + 2.0 / kD && q < (1.0 + 2.0 / kD) * p))
    throw std::invalid_argument("q must satisfy p + 2/d < q < (1 + 2/d) p");
  return 3.0 * kD * (kD - 2.0) * (p - 1.0) / ((kD + 2.0) * p - kD * q);
}

namespace {

struct InterpolationTail {
  double m;
  double lp_factor;  // ||g||_p^{p(q-p-2/d)/(p-1)}
  double l1m_factor;  // ||g <x>^m||_1^{((d+2)p-dq)/(d(p-1))}
};

InterpolationTail interpolation_tail(const ScalarField& g, double p, double q) {
  const double m = interpolation_moment(p, q);
  const double lp = lp_norm(g, p);
  const double l1m = weighted_l1m(g, m);
  return {m, std::pow(lp, p * (q - p - 2.0 / kD) / (p - 1.0)),
          std::pow(l1m, ((kD + 2.0) * p - kD * q) / (kD * (p - 1.0)))};
}

}  // namespace

InequalityReport check_interpolation_star(const ScalarField& g, double p, double q) {
  const auto tail = interpolation_tail(g, p, q);
  const double lhs = power_sum(g, q);
  // ||<x>^{-3(d-2)/p} g||_{dp/(d-2)}^p = (sum g^{dp/(d-2)} <x>^{-3d})^{(d-2)/d}
  const double weighted = std::pow(power_sum(g, kD * p / (kD - 2.0), -3.0 * kD), (kD - 2.0) / kD);
  return make_report("interpolation_star", lhs, weighted * tail.lp_factor * tail.l1m_factor, 1.0 + 1e-6,
                     {{"p", p}, {"q", q}, {"m", tail.m}});
}

InequalityReport check_interpolation_full(const ScalarField& g, double p, double q) {
  const auto tail = interpolation_tail(g, p, q);
  const double lhs = power_sum(g, q);
  const double grad = weighted_grad_energy(positive_power(g, 0.5 * p), -kD);
  const double lpp = power_sum(g, p);
  return make_report("interpolation_full", lhs, (grad + lpp) * tail.lp_factor * tail.l1m_factor,
                     std::numeric_limits<double>::infinity(), {{"p", p}, {"q", q}, {"m", tail.m}});
}

double max_spectral_norm(const SymMatrixField& A) {
  double m = 0.0;
  for (std::size_t idx = 0; idx < A.grid.size(); ++idx) m = std::max(m, sym3_spectral_norm(A.at(idx)));
  return m;
}

double max_vector_norm(const VectorField& v) {
  double m = 0.0;
  for (std::size_t idx = 0; idx < v.grid.size(); ++idx) m = std::max(m, v.norm_at(idx));
  return m;
}

InequalityReport lemma21_A_ratio(const ScalarField& u, double p, const SymMatrixField& A) {
  if (!(p > kD / 2.0)) throw std::invalid_argument("A bound needs p > d/2");
  const double den = std::pow(lp_norm(u, p), p * (kD - 2.0) / (kD * (p - 1.0))) *
                     std::pow(lp_norm(u, 1.0), (2.0 * p - kD) / (kD * (p - 1.0)));
  return make_report("lemma21_A", max_spectral_norm(A), den, std::numeric_limits<double>::infinity(), {{"p", p}});
}

InequalityReport lemma21_divA_ratio(const ScalarField& u, double p, const VectorField& divA) {
  if (!(p > kD)) throw std::invalid_argument("div A bound needs p > d");
  const double den = std::pow(lp_norm(u, p), p * (kD - 1.0) / (kD * (p - 1.0))) *
                     std::pow(lp_norm(u, 1.0), (p - kD) / (kD * (p - 1.0)));
  return make_report("lemma21_divA", max_vector_norm(divA), den, std::numeric_limits<double>::infinity(),
                     {{"p", p}});
}

}  // namespace landau
