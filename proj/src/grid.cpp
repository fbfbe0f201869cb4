#include "landau/grid.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace landau {

Grid make_grid(int n, double L) {
  if (n % 2 != 0) throw std::invalid_argument("n must be even");
  if (n < 8) throw std::invalid_argument("n must be at least 8");
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("L must be positive");
  return Grid{n, L, L / n};
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b))
    throw GridMismatch("grid mismatch: n=" + std::to_string(a.n) + " L=" + std::to_string(a.L) +
                       " vs n=" + std::to_string(b.n) + " L=" + std::to_string(b.L));
}

ScalarField::ScalarField(const Grid& g, std::vector<double> values) : grid_(g), data_(std::move(values)) {
  if (data_.size() != g.size()) throw GridMismatch("value count does not match grid");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

bool ScalarField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::min_value() const {
  return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
}

double ScalarField::max_value() const {
  return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

ScalarField operator*(double s, ScalarField f) {
  f *= s;
  return f;
}

ScalarField operator+(ScalarField a, const ScalarField& b) {
  a += b;
  return a;
}

SymMatrixField SymMatrixField::identity(const Grid& g) {
  SymMatrixField a(g);
  for (int c = 0; c < 3; ++c) std::fill(a.comp[c].begin(), a.comp[c].end(), 1.0);
  return a;
}

double SymMatrixField::entry(std::size_t idx, int r, int c) const {
  if (r == c) return comp[r][idx];
  const int lo = std::min(r, c), hi = std::max(r, c);
  if (lo == 0 && hi == 1) return comp[k12][idx];
  if (lo == 0 && hi == 2) return comp[k13][idx];
  return comp[k23][idx];
}

SymMatrixField& SymMatrixField::operator*=(double s) {
  for (auto& c : comp)
    for (double& v : c) v *= s;
  return *this;
}

double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t kBlock = 128;
  if (v.size() <= kBlock) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double integrate(const ScalarField& f) { return pairwise_sum(f.values()) * f.grid().cell_volume(); }

namespace {

// Derivative of f along one axis at cell index `a` of that axis, given the
// flat stride of that axis.
inline double axis_derivative(std::span<const double> f, std::size_t idx, int a, int n, std::size_t stride,
                              double inv2h) {
  if (a == 0) return (-3.0 * f[idx] + 4.0 * f[idx + stride] - f[idx + 2 * stride]) * inv2h;
  if (a == n - 1) return (3.0 * f[idx] - 4.0 * f[idx - stride] + f[idx - 2 * stride]) * inv2h;
  return (f[idx + stride] - f[idx - stride]) * inv2h;
}

}  // namespace

VectorField gradient(const ScalarField& f) {
  const Grid& g = f.grid();
  VectorField out(g);
  const auto v = f.values();
  const double inv2h = 0.5 / g.h;
  const std::size_t sx = 1, sy = static_cast<std::size_t>(g.n), sz = sy * g.n;
  for_each_cell(g, [&](int i, int j, int k, std::size_t idx) {
    out.comp[0][idx] = axis_derivative(v, idx, i, g.n, sx, inv2h);
    out.comp[1][idx] = axis_derivative(v, idx, j, g.n, sy, inv2h);
    out.comp[2][idx] = axis_derivative(v, idx, k, g.n, sz, inv2h);
  });
  return out;
}

double boundary_mass_fraction(const ScalarField& f, int shell_width) {
  const Grid& g = f.grid();
  if (shell_width < 0 || 4 * shell_width >= g.n)
    throw std::invalid_argument("shell width must be below n/4");
  std::vector<double> shell;
  shell.reserve(g.size() / 2);
  const int hi = g.n - shell_width;
  for_each_cell(g, [&](int i, int j, int k, std::size_t idx) {
    const bool inner = i >= shell_width && i < hi && j >= shell_width && j < hi && k >= shell_width && k < hi;
    if (!inner) shell.push_back(f[idx]);
  });
  const double total = pairwise_sum(f.values());
  if (!(total > 0.0)) return 0.0;
  return pairwise_sum(shell) / total;
}

}  // namespace landau
