#pragma once

#include <array>

namespace landau {

/// Eigenvalues of a symmetric 3x3 matrix given as (11, 22, 33, 12, 13, 23),
/// ascending. Closed-form trigonometric solve.
std::array<double, 3> sym3_eigenvalues(const std::array<double, 6>& a);

/// Same eigenvalues by cyclic Jacobi rotations. Slower, but accurate to
/// round-off relative to the matrix norm even when two eigenvalues coincide,
/// where the closed form loses about half the digits.
std::array<double, 3> sym3_eigenvalues_jacobi(const std::array<double, 6>& a);

/// Spectral norm, i.e. the largest absolute eigenvalue (Jacobi).
double sym3_spectral_norm(const std::array<double, 6>& a);

}  // namespace landau
