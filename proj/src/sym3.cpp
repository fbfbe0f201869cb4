#include "landau/sym3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace landau {

std::array<double, 3> sym3_eigenvalues(const std::array<double, 6>& a) {
  const double a11 = a[0], a22 = a[1], a33 = a[2], a12 = a[3], a13 = a[4], a23 = a[5];
  const double off = a12 * a12 + a13 * a13 + a23 * a23;
  if (off == 0.0) {
    std::array<double, 3> e{a11, a22, a33};
    std::sort(e.begin(), e.end());
    return e;
  }
  const double q = (a11 + a22 + a33) / 3.0;
  const double b11 = a11 - q, b22 = a22 - q, b33 = a33 - q;
  const double p2 = b11 * b11 + b22 * b22 + b33 * b33 + 2.0 * off;
  const double p = std::sqrt(p2 / 6.0);
  // det(B / p) / 2, clamped into [-1, 1] against round-off.
  const double det = b11 * (b22 * b33 - a23 * a23) - a12 * (a12 * b33 - a23 * a13) + a13 * (a12 * a23 - b22 * a13);
  const double r = std::clamp(det / (2.0 * p * p * p), -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  std::array<double, 3> e{e3, e2, e1};
  std::sort(e.begin(), e.end());
  return e;
}

std::array<double, 3> sym3_eigenvalues_jacobi(const std::array<double, 6>& a) {
  double m[3][3] = {{a[0], a[3], a[4]}, {a[3], a[1], a[5]}, {a[4], a[5], a[2]}};
  for (int sweep = 0; sweep < 32; ++sweep) {
    const double off = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    const double diag = m[0][0] * m[0][0] + m[1][1] * m[1][1] + m[2][2] * m[2][2];
    if (off <= 1e-36 * diag || off == 0.0) break;
    for (const auto& [p, q] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
      if (m[p][q] == 0.0) continue;
      // Rotation annihilating m[p][q] (Golub and Van Loan, symmetric Schur).
      const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
      const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
      const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
      for (int k = 0; k < 3; ++k) {
        const double mkp = m[k][p], mkq = m[k][q];
        m[k][p] = c * mkp - s * mkq;
        m[k][q] = s * mkp + c * mkq;
      }
      for (int k = 0; k < 3; ++k) {
        const double mpk = m[p][k], mqk = m[q][k];
        m[p][k] = c * mpk - s * mqk;
        m[q][k] = s * mpk + c * mqk;
      }
    }
  }
  std::array<double, 3> e{m[0][0], m[1][1], m[2][2]};
  std::sort(e.begin(), e.end());
  return e;
}

double sym3_spectral_norm(const std::array<double, 6>& a) {
  const auto e = sym3_eigenvalues_jacobi(a);
  return std::max(std::abs(e[0]), std::abs(e[2]));
}

}  // namespace landau
