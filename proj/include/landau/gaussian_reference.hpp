#pragma once

#include <array>

namespace landau {

/// Closed-form continuum coefficients for an isotropic Gaussian of mass `m`
/// and width `sigma` centred at the origin.
///
/// With psi = u * |z|, P(z)/|z| is the Hessian of |z|, so A = c_d D^2 psi and
/// psi is radial: A = c_d [psi'' xx^T/r^2 + (psi'/r)(Id - xx^T/r^2)], where
/// (r^2 psi')' = 2 r^2 phi and phi = u * 1/|z| = m erf(r/(sqrt2 sigma))/r.
struct GaussianReference {
  double mass = 1.0;
  double sigma = 1.0;

  /// u * 1/|z| at radius r.
  double newtonian(double r) const;
  /// psi'(r) and psi''(r).
  double psi_prime(double r) const;
  double psi_second(double r) const;

  /// A[u](x) in (11, 22, 33, 12, 13, 23) order.
  std::array<double, 6> A(const std::array<double, 3>& x, double c_d) const;
  /// div A[u](x) = (d-1) c_d grad phi.
  std::array<double, 3> divA(const std::array<double, 3>& x, double c_d) const;
};

}  // namespace landau
