#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace landau {

/// Spatial dimension. Execution is fixed to three dimensions; formulas that
/// carry the dimension as a symbol use this constant.
inline constexpr int kDim = 3;

/// Uniform cell-centred grid on the cube [-L/2, L/2)^3.
///
/// Cell (i, j, k) has centre ((i + 1/2) h - L/2, ...), and the flat index is
/// x-fastest: i + n (j + n k).
struct Grid {
  int n = 0;
  double L = 0.0;
  double h = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  double cell_volume() const { return h * h * h; }
  double center(int i) const { return (i + 0.5) * h - 0.5 * L; }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(n) * k);
  }

  std::array<double, 3> position(int i, int j, int k) const { return {center(i), center(j), center(k)}; }

  /// Japanese bracket <x> = (1 + |x|^2)^{1/2} at a cell centre.
  double bracket(int i, int j, int k) const {
    const double x = center(i), y = center(j), z = center(k);
    return std::sqrt(1.0 + x * x + y * y + z * z);
  }

  bool operator==(const Grid& o) const { return n == o.n && L == o.L; }
};

/// Throws std::invalid_argument for odd n, n < 8, or L <= 0.
Grid make_grid(int n, double L);

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void require_same_grid(const Grid& a, const Grid& b);

/// Loops over every cell in flat-index order.
template <class F>
void for_each_cell(const Grid& g, F&& f) {
  std::size_t idx = 0;
  for (int k = 0; k < g.n; ++k)
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i, ++idx) f(i, j, k, idx);
}

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& g, double value = 0.0) : grid_(g), data_(g.size(), value) {}
  ScalarField(const Grid& g, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& at(int i, int j, int k) { return data_[grid_.index(i, j, k)]; }
  double at(int i, int j, int k) const { return data_[grid_.index(i, j, k)]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator*=(double s);

  bool all_finite() const;
  double min_value() const;
  double max_value() const;

 private:
  Grid grid_;
  std::vector<double> data_;
};

ScalarField operator*(double s, ScalarField f);
ScalarField operator+(ScalarField a, const ScalarField& b);

/// Fills a field from a function of the cell-centre position.
template <class F>
ScalarField sample(const Grid& g, F&& f) {
  ScalarField out(g);
  for_each_cell(g, [&](int i, int j, int k, std::size_t idx) {
    out[idx] = f(g.center(i), g.center(j), g.center(k));
  });
  return out;
}

struct VectorField {
  Grid grid;
  std::array<std::vector<double>, 3> comp;

  VectorField() = default;
  explicit VectorField(const Grid& g) : grid(g) {
    for (auto& c : comp) c.assign(g.size(), 0.0);
  }
  double norm_at(std::size_t idx) const {
    return std::sqrt(comp[0][idx] * comp[0][idx] + comp[1][idx] * comp[1][idx] + comp[2][idx] * comp[2][idx]);
  }
};

/// Symmetric 3x3 matrix per cell, components ordered (11, 22, 33, 12, 13, 23).
struct SymMatrixField {
  enum Component { k11 = 0, k22, k33, k12, k13, k23 };

  Grid grid;
  std::array<std::vector<double>, 6> comp;

  SymMatrixField() = default;
  explicit SymMatrixField(const Grid& g) : grid(g) {
    for (auto& c : comp) c.assign(g.size(), 0.0);
  }

  /// Every cell holds the identity.
  static SymMatrixField identity(const Grid& g);

  std::array<double, 6> at(std::size_t idx) const {
    return {comp[0][idx], comp[1][idx], comp[2][idx], comp[3][idx], comp[4][idx], comp[5][idx]};
  }
  double entry(std::size_t idx, int r, int c) const;
  SymMatrixField& operator*=(double s);
};

/// Pairwise (cascade) summation; fixed order so results are reproducible.
double pairwise_sum(std::span<const double> v);

/// Midpoint rule: sum of cell values times h^3.
double integrate(const ScalarField& f);

/// Second-order central differences inside, second-order one-sided stencils
/// on the first and last cell of each axis.
VectorField gradient(const ScalarField& f);

/// Fraction of the total mass held by cells within `shell_width` cells of the
/// box boundary. Returns 0 when the total mass is not positive.
double boundary_mass_fraction(const ScalarField& f, int shell_width);

}  // namespace landau
