#include "landau/gaussian_reference.hpp"

#include <cmath>
#include <numbers>

#include "landau/grid.hpp"

namespace landau {
namespace {

constexpr double kSmall = 1e-4;  // radii below kSmall * sigma use the Taylor limit

}  // namespace

double GaussianReference::newtonian(double r) const {
  const double a = 1.0 / (std::numbers::sqrt2 * sigma);
  if (r < kSmall * sigma) return mass * 2.0 * a / std::sqrt(std::numbers::pi);
  return mass * std::erf(a * r) / r;
}

double GaussianReference::psi_prime(double r) const {
  if (r < kSmall * sigma) return 2.0 * newtonian(0.0) * r / 3.0;
  const double s2 = sigma * sigma;
  const double a = 1.0 / (std::numbers::sqrt2 * sigma);
  const double bracket = 0.5 * (r * r - s2) * std::erf(a * r) +
                         r * sigma * std::exp(-0.5 * r * r / s2) / std::sqrt(2.0 * std::numbers::pi);
  return 2.0 * mass * bracket / (r * r);
}

double GaussianReference::psi_second(double r) const {
  if (r < kSmall * sigma) return 2.0 * newtonian(0.0) / 3.0;
  return 2.0 * newtonian(r) - 2.0 * psi_prime(r) / r;
}

std::array<double, 6> GaussianReference::A(const std::array<double, 3>& x, double c_d) const {
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  if (r < kSmall * sigma) {
    const double d = c_d * psi_second(0.0);
    return {d, d, d, 0.0, 0.0, 0.0};
  }
  const double radial = psi_second(r);
  const double tangential = psi_prime(r) / r;
  const double e[3] = {x[0] / r, x[1] / r, x[2] / r};
  auto entry = [&](int i, int j) { return c_d * ((radial - tangential) * e[i] * e[j] + (i == j ? tangential : 0.0)); };
  return {entry(0, 0), entry(1, 1), entry(2, 2), entry(0, 1), entry(0, 2), entry(1, 2)};
}

std::array<double, 3> GaussianReference::divA(const std::array<double, 3>& x, double c_d) const {
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  if (r < kSmall * sigma) return {0.0, 0.0, 0.0};
  const double a = 1.0 / (std::numbers::sqrt2 * sigma);
  const double dphi =
      mass * (2.0 * a / std::sqrt(std::numbers::pi) * std::exp(-a * a * r * r) / r - std::erf(a * r) / (r * r));
  const double s = (kDim - 1) * c_d * dphi / r;
  return {s * x[0], s * x[1], s * x[2]};
}

}  // namespace landau
