#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "landau/grid.hpp"

namespace landau {

/// (sum |u|^p h^3)^{1/p}; throws for p < 1.
double lp_norm(const ScalarField& u, double p);
double linf_norm(const ScalarField& u);
/// sum |u|^p h^3, the p-th power of lp_norm without the root.
double lp_power(const ScalarField& u, double p);

/// sum |u| <x>^m h^3, the L^1_m norm.
double weighted_l1m(const ScalarField& u, double m);

/// sum u log u h^3 over cells with u > 0.
double entropy(const ScalarField& u);

/// sum <A grad w, grad w> h^3 with w = (u_+)^{p/2}.
double dissipation(const ScalarField& u, double p, const SymMatrixField& A);

/// sum |grad f|^2 <x>^w h^3.
double weighted_grad_energy(const ScalarField& f, double weight_exponent);

/// Pointwise power of the positive part, (f_+)^e.
ScalarField positive_power(const ScalarField& f, double e);

/// Outcome of one numerical inequality check.
///
/// ratio = lhs / rhs. A 0/0 check is a conventional pass with ratio 0; a
/// positive lhs over a zero rhs has ratio +inf and fails.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double threshold = 1.0;
  bool pass = true;
  std::map<std::string, double> params;
  std::optional<std::string> worst_case;

  nlohmann::json to_json() const;
};

/// Fills ratio and pass from lhs, rhs and threshold.
InequalityReport make_report(std::string name, double lhs, double rhs, double threshold,
                             std::map<std::string, double> params = {});

/// int u^{p+1} <= ((p+1)/p)^2 int <A grad u^{p/2}, grad u^{p/2}>, evaluated
/// for every c_d in `sweep`. `A` was computed with normalisation `c_ref`;
/// the coefficient is linear in c_d so it is rescaled rather than rebuilt.
std::vector<InequalityReport> check_poincare_gks(const ScalarField& u, double p, const SymMatrixField& A, double c_ref,
                                                 std::span<const double> sweep);

/// Terms of the weighted Sobolev inequality with f in place; ratio is the
/// empirical constant lhs / (grad + L^s term). params carry "grad" and "ls".
InequalityReport check_weighted_sobolev(const ScalarField& f, double s);

/// Interpolation exponent m = 3d(d-2)(p-1)/((d+2)p - dq); throws unless
/// p > 1 and p + 2/d < q < (1 + 2/d) p.
double interpolation_moment(double p, double q);

/// Pure-Holder interpolation with constant 1; pass means ratio <= 1 + 1e-6.
InequalityReport check_interpolation_star(const ScalarField& g, double p, double q);

/// Interpolation with the weighted gradient term; the ratio is the empirical
/// constant and always passes (the constant is not specified).
InequalityReport check_interpolation_full(const ScalarField& g, double p, double q);

/// ||A||_inf / (||u||_p^{p(d-2)/(d(p-1))} ||u||_1^{(2p-d)/(d(p-1))}); needs
/// p > d/2. The matrix sup norm is the pointwise spectral norm.
InequalityReport lemma21_A_ratio(const ScalarField& u, double p, const SymMatrixField& A);

/// ||div A||_inf / (||u||_p^{p(d-1)/(d(p-1))} ||u||_1^{(p-d)/(d(p-1))}); needs
/// p > d.
InequalityReport lemma21_divA_ratio(const ScalarField& u, double p, const VectorField& divA);

double max_spectral_norm(const SymMatrixField& A);
double max_vector_norm(const VectorField& v);

}  // namespace landau
