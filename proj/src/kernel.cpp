#include "landau/kernel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "landau/sym3.hpp"

namespace landau {

double effective_radius(double h) { return h * std::cbrt(3.0 / (4.0 * std::numbers::pi)); }

KernelSample sample_kernels(double z1, double z2, double z3, double r_eff) {
  KernelSample s{};
  const double r2 = z1 * z1 + z2 * z2 + z3 * z3;
  if (r2 == 0.0) {
    // Ball averages: <1/|z|> = 3/(2 r), <P> = ((d-1)/d) Id, odd kernel -> 0.
    s.inverse = 1.5 / r_eff;
    const double diag = (static_cast<double>(kDim - 1) / kDim) * s.inverse;
    s.matrix = {diag, diag, diag, 0.0, 0.0, 0.0};
    s.gradient = {0.0, 0.0, 0.0};
    return s;
  }
  const double r = std::sqrt(r2);
  const double inv = 1.0 / r;
  const double inv3 = inv / r2;
  s.inverse = inv;
  s.matrix = {inv - z1 * z1 * inv3, inv - z2 * z2 * inv3, inv - z3 * z3 * inv3,
              -z1 * z2 * inv3,      -z1 * z3 * inv3,      -z2 * z3 * inv3};
  s.gradient = {z1 * inv3, z2 * inv3, z3 * inv3};
  return s;
}

// ---------------------------------------------------------------------------
// ConvolutionPlan

// The physical data occupies the corner block [0, n)^3 of the padded box and
// only that block of each result is read back. The transforms are therefore
// split into 1-D passes that skip lines known to be zero on the way in and
// lines never read on the way out, which removes about 40% of the work of a
// full 3-D transform.
struct ConvolutionPlan::Impl {
  Grid grid;
  int N = 0;
  int Nh = 0;  // N/2 + 1 complex entries along x
  std::size_t real_size = 0;
  std::size_t spec_size = 0;  // complex entries
  double* real = nullptr;
  fftw_complex* uhat = nullptr;
  fftw_complex* work = nullptr;
  fftw_plan full_forward = nullptr;  // unpruned, for kernel samples
  fftw_plan x_forward = nullptr;     // n rows of one z-plane
  fftw_plan y_forward = nullptr;     // one z-plane, in place
  fftw_plan z_forward = nullptr;     // all columns, in place
  fftw_plan z_backward = nullptr;
  fftw_plan y_backward = nullptr;
  fftw_plan x_backward = nullptr;

  explicit Impl(const Grid& g) : grid(g), N(2 * g.n), Nh(g.n + 1) {
    real_size = static_cast<std::size_t>(N) * N * N;
    spec_size = static_cast<std::size_t>(N) * N * Nh;
    real = fftw_alloc_real(real_size);
    uhat = fftw_alloc_complex(spec_size);
    work = fftw_alloc_complex(spec_size);
    if (!real || !uhat || !work) {
      release();
      throw std::bad_alloc();
    }
    const int n = g.n;
    const int plane = N * Nh;
    // FFTW_ESTIMATE keeps plans (and therefore round-off) identical run to run.
    constexpr unsigned flags = FFTW_ESTIMATE;
    full_forward = fftw_plan_dft_r2c_3d(N, N, N, real, uhat, flags);
    x_forward = fftw_plan_many_dft_r2c(1, &N, n, real, nullptr, 1, N, uhat, nullptr, 1, Nh, flags);
    y_forward = fftw_plan_many_dft(1, &N, Nh, uhat, nullptr, Nh, 1, uhat, nullptr, Nh, 1, FFTW_FORWARD, flags);
    z_forward = fftw_plan_many_dft(1, &N, plane, uhat, nullptr, plane, 1, uhat, nullptr, plane, 1, FFTW_FORWARD, flags);
    z_backward = fftw_plan_many_dft(1, &N, plane, work, nullptr, plane, 1, work, nullptr, plane, 1, FFTW_BACKWARD, flags);
    y_backward = fftw_plan_many_dft(1, &N, Nh, work, nullptr, Nh, 1, work, nullptr, Nh, 1, FFTW_BACKWARD, flags);
    x_backward = fftw_plan_many_dft_c2r(1, &N, n, work, nullptr, 1, Nh, real, nullptr, 1, N, flags);
    if (!full_forward || !x_forward || !y_forward || !z_forward || !z_backward || !y_backward || !x_backward) {
      release();
      throw std::runtime_error("FFTW planning failed");
    }
  }
  ~Impl() { release(); }

  void release() {
    for (fftw_plan* pl : {&full_forward, &x_forward, &y_forward, &z_forward, &z_backward, &y_backward, &x_backward}) {
      if (*pl) fftw_destroy_plan(*pl);
      *pl = nullptr;
    }
    fftw_free(real);
    fftw_free(uhat);
    fftw_free(work);
    real = nullptr;
    uhat = work = nullptr;
  }

  std::size_t plane_offset(int k) const { return static_cast<std::size_t>(k) * N * Nh; }

  // real (zero outside the corner block) -> uhat, same layout as the 3-D r2c.
  void forward_pruned() {
    const int n = grid.n;
    std::memset(uhat, 0, spec_size * sizeof(fftw_complex));
    for (int k = 0; k < n; ++k)
      fftw_execute_dft_r2c(x_forward, real + static_cast<std::size_t>(k) * N * N, uhat + plane_offset(k));
    for (int k = 0; k < n; ++k) fftw_execute_dft(y_forward, uhat + plane_offset(k), uhat + plane_offset(k));
    fftw_execute(z_forward);
  }

  // work -> corner block of real; work is overwritten.
  void backward_pruned() {
    const int n = grid.n;
    fftw_execute(z_backward);
    for (int k = 0; k < n; ++k) fftw_execute_dft(y_backward, work + plane_offset(k), work + plane_offset(k));
    for (int k = 0; k < n; ++k)
      fftw_execute_dft_c2r(x_backward, work + plane_offset(k), real + static_cast<std::size_t>(k) * N * N);
  }

  void extract(double scale, std::span<double> out) const {
    const int n = grid.n;
    std::size_t idx = 0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        const double* row = real + (static_cast<std::size_t>(k) * N + j) * N;
        for (int i = 0; i < n; ++i, ++idx) out[idx] = scale * row[i];
      }
  }
};

ConvolutionPlan::ConvolutionPlan(const Grid& g) : impl_(std::make_unique<Impl>(g)) {}
ConvolutionPlan::~ConvolutionPlan() = default;
ConvolutionPlan::ConvolutionPlan(ConvolutionPlan&&) noexcept = default;
ConvolutionPlan& ConvolutionPlan::operator=(ConvolutionPlan&&) noexcept = default;

const Grid& ConvolutionPlan::grid() const { return impl_->grid; }
int ConvolutionPlan::padded() const { return impl_->N; }
std::size_t ConvolutionPlan::spectrum_size() const { return impl_->spec_size; }

void ConvolutionPlan::load(const ScalarField& f) {
  require_same_grid(f.grid(), impl_->grid);
  Impl& p = *impl_;
  const int n = p.grid.n, N = p.N;
  const auto v = f.values();
  std::size_t idx = 0;
  // Only the rows of the corner block are read by the pruned transform.
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      double* row = p.real + (static_cast<std::size_t>(k) * N + j) * N;
      for (int i = 0; i < n; ++i, ++idx) row[i] = v[idx];
      std::fill(row + n, row + N, 0.0);
    }
  p.forward_pruned();
}

void ConvolutionPlan::load_padded(std::span<const double> samples) {
  Impl& p = *impl_;
  if (samples.size() != p.real_size) throw std::invalid_argument("padded sample count mismatch");
  std::copy(samples.begin(), samples.end(), p.real);
  fftw_execute(p.full_forward);
}

std::span<const double> ConvolutionPlan::spectrum() const {
  return {reinterpret_cast<const double*>(impl_->uhat), 2 * impl_->spec_size};
}

void ConvolutionPlan::convolve_real(std::span<const double> factor, double scale, std::span<double> out) {
  Impl& p = *impl_;
  if (factor.size() != p.spec_size) throw GridMismatch("kernel spectrum does not match plan");
  for (std::size_t q = 0; q < p.spec_size; ++q) {
    p.work[q][0] = p.uhat[q][0] * factor[q];
    p.work[q][1] = p.uhat[q][1] * factor[q];
  }
  p.backward_pruned();
  p.extract(scale, out);
}

void ConvolutionPlan::convolve_imag(std::span<const double> factor, double scale, std::span<double> out) {
  Impl& p = *impl_;
  if (factor.size() != p.spec_size) throw GridMismatch("kernel spectrum does not match plan");
  // (a + ib)(i s) = -b s + i a s
  for (std::size_t q = 0; q < p.spec_size; ++q) {
    p.work[q][0] = -p.uhat[q][1] * factor[q];
    p.work[q][1] = p.uhat[q][0] * factor[q];
  }
  p.backward_pruned();
  p.extract(scale, out);
}

// ---------------------------------------------------------------------------
// Kernel table

namespace {

enum class Part { real, imag };

std::vector<double> transform_kernel(ConvolutionPlan& plan, std::span<const double> samples, Part part,
                                     double weight) {
  plan.load_padded(samples);
  const auto spec = plan.spectrum();
  std::vector<double> out(plan.spectrum_size());
  const std::size_t offset = part == Part::real ? 0 : 1;
  for (std::size_t q = 0; q < out.size(); ++q) out[q] = weight * spec[2 * q + offset];
  return out;
}

}  // namespace

KernelTable build_kernel_table(const Grid& g, double c_d, KernelSet kernels) {
  if (!(c_d > 0.0)) throw std::invalid_argument("c_d must be positive");
  KernelTable t;
  t.grid = g;
  t.padded = 2 * g.n;
  t.c_d = c_d;
  t.kernels = kernels;
  t.r_eff = effective_radius(g.h);
  const KernelSample origin = sample_kernels(0.0, 0.0, 0.0, t.r_eff);
  t.origin_inverse = origin.inverse;
  t.origin_matrix_diag = origin.matrix[0];

  const int n = g.n, N = t.padded;
  const std::size_t total = static_cast<std::size_t>(N) * N * N;
  const double weight = g.cell_volume() / static_cast<double>(total);

  std::vector<double> disp(N);
  for (int a = 0; a < N; ++a) disp[a] = (a < n ? a : a - N) * g.h;

  ConvolutionPlan plan(g);
  std::vector<double> buf(total);

  // Fills `buf` with one kernel component; `odd` flags axes on which the
  // component is odd, whose z = -L planes are zeroed.
  auto fill = [&](auto&& value, std::array<bool, 3> odd) {
    std::size_t idx = 0;
    for (int k = 0; k < N; ++k)
      for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i, ++idx) {
          const bool cut = (odd[0] && i == n) || (odd[1] && j == n) || (odd[2] && k == n);
          buf[idx] = cut ? 0.0 : value(sample_kernels(disp[i], disp[j], disp[k], t.r_eff));
        }
  };

  if (has(kernels, KernelSet::matrix)) {
    constexpr std::array<std::array<bool, 3>, 6> parity = {{{false, false, false},
                                                            {false, false, false},
                                                            {false, false, false},
                                                            {true, true, false},
                                                            {true, false, true},
                                                            {false, true, true}}};
    for (int c = 0; c < 6; ++c) {
      fill([c](const KernelSample& s) { return s.matrix[c]; }, parity[c]);
      t.matrix_spectrum[c] = transform_kernel(plan, buf, Part::real, weight);
    }
  }
  if (has(kernels, KernelSet::gradient)) {
    for (int c = 0; c < 3; ++c) {
      std::array<bool, 3> odd{false, false, false};
      odd[c] = true;
      fill([c](const KernelSample& s) { return s.gradient[c]; }, odd);
      t.gradient_spectrum[c] = transform_kernel(plan, buf, Part::imag, weight);
    }
  }
  if (has(kernels, KernelSet::newtonian)) {
    fill([](const KernelSample& s) { return s.inverse; }, {false, false, false});
    t.inverse_spectrum = transform_kernel(plan, buf, Part::real, weight);
  }
  return t;
}

namespace {

void require_kernels(const KernelTable& table, KernelSet bit, const char* what) {
  if (!has(table.kernels, bit)) throw std::invalid_argument(std::string("kernel table lacks ") + what + " spectra");
}

}  // namespace

SymMatrixField compute_A(const ScalarField& u, const KernelTable& table, ConvolutionPlan& plan) {
  require_same_grid(u.grid(), table.grid);
  require_kernels(table, KernelSet::matrix, "matrix");
  SymMatrixField A(u.grid());
  plan.load(u);
  for (int c = 0; c < 6; ++c) plan.convolve_real(table.matrix_spectrum[c], table.c_d, A.comp[c]);
  return A;
}

VectorField compute_divA(const ScalarField& u, const KernelTable& table, ConvolutionPlan& plan) {
  require_same_grid(u.grid(), table.grid);
  require_kernels(table, KernelSet::gradient, "gradient");
  VectorField out(u.grid());
  plan.load(u);
  const double scale = -static_cast<double>(kDim - 1) * table.c_d;
  for (int c = 0; c < 3; ++c) plan.convolve_imag(table.gradient_spectrum[c], scale, out.comp[c]);
  return out;
}

ScalarField newtonian_potential(const ScalarField& u, const KernelTable& table, ConvolutionPlan& plan) {
  require_same_grid(u.grid(), table.grid);
  require_kernels(table, KernelSet::newtonian, "newtonian");
  ScalarField out(u.grid());
  plan.load(u);
  plan.convolve_real(table.inverse_spectrum, 1.0, out.values());
  return out;
}

std::vector<std::array<double, 6>> quadrature_oracle_A(const ScalarField& u, std::span<const std::size_t> cells,
                                                       double c_d) {
  const Grid& g = u.grid();
  const double vol = g.cell_volume();
  const double self = (2.0 / 3.0) * 1.5 / effective_radius(g.h);
  std::vector<std::array<double, 6>> out;
  out.reserve(cells.size());
  for (std::size_t target : cells) {
    const int ti = static_cast<int>(target % g.n);
    const int tj = static_cast<int>((target / g.n) % g.n);
    const int tk = static_cast<int>(target / (static_cast<std::size_t>(g.n) * g.n));
    std::array<double, 6> acc{};
    for_each_cell(g, [&](int i, int j, int k, std::size_t idx) {
      const double w = u[idx];
      if (w == 0.0) return;
      if (idx == target) {
        acc[0] += self * w;
        acc[1] += self * w;
        acc[2] += self * w;
        return;
      }
      const double z[3] = {(ti - i) * g.h, (tj - j) * g.h, (tk - k) * g.h};
      const double r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
      const double r = std::sqrt(r2);
      const double a = w / r, b = w / (r * r2);
      acc[0] += a - b * z[0] * z[0];
      acc[1] += a - b * z[1] * z[1];
      acc[2] += a - b * z[2] * z[2];
      acc[3] -= b * z[0] * z[1];
      acc[4] -= b * z[0] * z[2];
      acc[5] -= b * z[1] * z[2];
    });
    for (double& v : acc) v *= c_d * vol;
    out.push_back(acc);
  }
  return out;
}

std::vector<double> quadrature_oracle_newtonian(const ScalarField& u, std::span<const std::size_t> cells) {
  const Grid& g = u.grid();
  const double self = 1.5 / effective_radius(g.h);
  std::vector<double> out;
  out.reserve(cells.size());
  for (std::size_t target : cells) {
    const int ti = static_cast<int>(target % g.n);
    const int tj = static_cast<int>((target / g.n) % g.n);
    const int tk = static_cast<int>(target / (static_cast<std::size_t>(g.n) * g.n));
    double acc = 0.0;
    for_each_cell(g, [&](int i, int j, int k, std::size_t idx) {
      if (idx == target) {
        acc += self * u[idx];
        return;
      }
      const double dx = (ti - i) * g.h, dy = (tj - j) * g.h, dz = (tk - k) * g.h;
      acc += u[idx] / std::sqrt(dx * dx + dy * dy + dz * dz);
    });
    out.push_back(acc * g.cell_volume());
  }
  return out;
}

EllipticityProfile ellipticity_profile(const SymMatrixField& A) {
  const Grid& g = A.grid;
  EllipticityProfile best{std::numeric_limits<double>::infinity(), 0};
  for_each_cell(g, [&](int i, int j, int k, std::size_t idx) {
    const double lmin = sym3_eigenvalues(A.at(idx))[0];
    const double value = lmin * std::pow(g.bracket(i, j, k), kDim);
    if (value < best.floor) best = {value, idx};
  });
  return best;
}

double max_eigenvalue(const SymMatrixField& A) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < A.grid.size(); ++idx) best = std::max(best, sym3_eigenvalues(A.at(idx))[2]);
  return best;
}

double min_eigen_ratio(const SymMatrixField& A) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < A.grid.size(); ++idx) {
    const auto e = sym3_eigenvalues(A.at(idx));
    if (e[2] > 0.0) best = std::min(best, e[0] / e[2]);
  }
  return best;
}

}  // namespace landau
