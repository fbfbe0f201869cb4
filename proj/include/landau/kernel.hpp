#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <numbers>
#include <vector>

#include "landau/grid.hpp"

namespace landau {

/// Default normalisation of the matrix kernel, 1/(8 pi).
inline constexpr double kDefaultCd = 1.0 / (8.0 * std::numbers::pi);

/// Which kernel spectra a table carries. The matrix set alone is enough for
/// compute_A; tables at large n can skip the rest to save memory.
enum class KernelSet : unsigned { matrix = 1u, gradient = 2u, newtonian = 4u, all = 7u };

constexpr KernelSet operator|(KernelSet a, KernelSet b) {
  return static_cast<KernelSet>(static_cast<unsigned>(a) | static_cast<unsigned>(b));
}
constexpr bool has(KernelSet set, KernelSet bit) {
  return (static_cast<unsigned>(set) & static_cast<unsigned>(bit)) != 0;
}

/// Samples of the three kernel families at one displacement z.
///
/// `matrix` is P(z)/|z| in (11, 22, 33, 12, 13, 23) order, `gradient` is
/// z/|z|^3, `inverse` is 1/|z|. At z = 0 the values are the ball averages
/// of radius r_eff (the odd kernel averages to zero).
struct KernelSample {
  std::array<double, 6> matrix;
  std::array<double, 3> gradient;
  double inverse;
};

/// Radius of the ball with the volume of one cell, h (3/(4 pi))^{1/3}.
double effective_radius(double h);

KernelSample sample_kernels(double z1, double z2, double z3, double r_eff);

/// Spectral data of the sampled kernels on the zero-padded (2n)^3 grid.
///
/// Every kernel is even or odd in each coordinate, so its DFT is purely real
/// or purely imaginary and only that part is stored. Samples on the planes
/// z_a = -L of odd axes are zeroed; those displacements never connect two
/// cells of the physical box. Spectra include the h^3 quadrature weight and
/// the 1/(2n)^3 inverse-transform factor, but not c_d.
struct KernelTable {
  Grid grid;
  int padded = 0;
  double c_d = kDefaultCd;
  double r_eff = 0.0;
  double origin_inverse = 0.0;      // 3 / (2 r_eff)
  double origin_matrix_diag = 0.0;  // ((d-1)/d) * 3 / (2 r_eff)
  KernelSet kernels = KernelSet::all;

  std::array<std::vector<double>, 6> matrix_spectrum;    // real parts
  std::array<std::vector<double>, 3> gradient_spectrum;  // imaginary parts
  std::vector<double> inverse_spectrum;                  // real parts
};

/// Reusable FFTW workspace for (2n)^3 real transforms.
///
/// Holds scratch buffers, so one plan must not be used from two threads at
/// once; give each thread its own plan. Construction calls the FFTW planner,
/// which is not thread-safe.
class ConvolutionPlan {
 public:
  explicit ConvolutionPlan(const Grid& g);
  ~ConvolutionPlan();
  ConvolutionPlan(ConvolutionPlan&&) noexcept;
  ConvolutionPlan& operator=(ConvolutionPlan&&) noexcept;
  ConvolutionPlan(const ConvolutionPlan&) = delete;
  ConvolutionPlan& operator=(const ConvolutionPlan&) = delete;

  const Grid& grid() const;
  int padded() const;
  std::size_t spectrum_size() const;

  /// Zero-pads `f` into the (2n)^3 box and transforms it; the spectrum stays
  /// in the plan for subsequent `convolve_*` calls.
  void load(const ScalarField& f);
  /// Transforms padded real samples already laid out on the (2n)^3 grid.
  void load_padded(std::span<const double> samples);
  /// Raw access to the last forward spectrum (interleaved re, im).
  std::span<const double> spectrum() const;

  /// Multiplies the loaded spectrum by a real (or purely imaginary) factor,
  /// inverts, and writes the physical n^3 block scaled by `scale` into `out`.
  void convolve_real(std::span<const double> factor, double scale, std::span<double> out);
  void convolve_imag(std::span<const double> factor, double scale, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Throws std::invalid_argument when c_d <= 0.
KernelTable build_kernel_table(const Grid& g, double c_d = kDefaultCd, KernelSet kernels = KernelSet::all);

/// A[u] = c_d * (P(z)/|z|) * u by free-space convolution.
SymMatrixField compute_A(const ScalarField& u, const KernelTable& table, ConvolutionPlan& plan);

/// div A[u] = -(d-1) c_d (z/|z|^3) * u.
VectorField compute_divA(const ScalarField& u, const KernelTable& table, ConvolutionPlan& plan);

/// u * 1/|z| (no c_d factor).
ScalarField newtonian_potential(const ScalarField& u, const KernelTable& table, ConvolutionPlan& plan);

/// Direct midpoint-rule sum of c_d P(x-y)/|x-y| u(y) h^3 at the listed cells,
/// with the self cell replaced by its ball-averaged contribution. O(n^3) per
/// point; independent of the spectral path.
std::vector<std::array<double, 6>> quadrature_oracle_A(const ScalarField& u, std::span<const std::size_t> cells,
                                                       double c_d = kDefaultCd);

/// Direct-sum counterpart of newtonian_potential.
std::vector<double> quadrature_oracle_newtonian(const ScalarField& u, std::span<const std::size_t> cells);

struct EllipticityProfile {
  double floor = 0.0;  // min over cells of lambda_min(A(x)) <x>^d
  std::size_t argmin = 0;
};

EllipticityProfile ellipticity_profile(const SymMatrixField& A);

/// Largest eigenvalue of A over all cells.
double max_eigenvalue(const SymMatrixField& A);

/// Smallest of lambda_min / lambda_max over cells where lambda_max > 0.
double min_eigen_ratio(const SymMatrixField& A);

}  // namespace landau
