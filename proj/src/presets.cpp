#include "landau/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace landau {
namespace {

void check_center(const Grid& g, const Point3& c) {
  for (double ci : c)
    if (std::abs(ci) > 0.25 * g.L) throw std::invalid_argument("bump center too near the boundary");
}

void check_width(const Grid& g, double sigma) {
  if (!(sigma >= 2.0 * g.h * (1.0 - 1e-12)))
    throw std::invalid_argument("width " + std::to_string(sigma) + " under-resolved (needs >= 2h)");
}

void add_gaussian(ScalarField& f, double mass, const Point3& sigma, const Point3& c) {
  const Grid& g = f.grid();
  const double norm = mass / (std::pow(2.0 * std::numbers::pi, 1.5) * sigma[0] * sigma[1] * sigma[2]);
  // Separable: precompute the 1-D factors per axis.
  std::array<std::vector<double>, 3> axis;
  for (int a = 0; a < 3; ++a) {
    axis[a].resize(g.n);
    for (int i = 0; i < g.n; ++i) {
      const double d = (g.center(i) - c[a]) / sigma[a];
      axis[a][i] = std::exp(-0.5 * d * d);
    }
  }
  for_each_cell(g, [&](int i, int j, int k, std::size_t idx) {
    f[idx] += norm * axis[0][i] * axis[1][j] * axis[2][k];
  });
}

void check_mass(const ScalarField& f, double requested) {
  if (requested <= 0.0) return;
  const double got = integrate(f);
  if (std::abs(got - requested) > 1e-3 * requested)
    throw std::invalid_argument("sampled mass " + std::to_string(got) + " misses requested " +
                                std::to_string(requested) + " (tails truncated by the box)");
}

struct Sampler {
  const Grid& g;
  ScalarField& f;

  void operator()(const preset::Gaussian& p) const {
    check_width(g, p.sigma);
    check_center(g, p.center);
    add_gaussian(f, p.mass, {p.sigma, p.sigma, p.sigma}, p.center);
  }
  void operator()(const preset::Spike& p) const {
    if (p.width_cells < 2.0) throw std::invalid_argument("spike width must be at least 2 cells");
    const double s = p.width_cells * g.h;
    add_gaussian(f, p.mass, {s, s, s}, {0.0, 0.0, 0.0});
  }
  void operator()(const preset::TwoBumps& p) const {
    (*this)(p.first);
    (*this)(p.second);
  }
  void operator()(const preset::AnisotropicGaussian& p) const {
    for (double s : p.sigma) check_width(g, s);
    check_center(g, p.center);
    add_gaussian(f, p.mass, p.sigma, p.center);
  }
  void operator()(const preset::RandomBumps& p) const {
    for (const auto& b : expand_random_bumps(g, p)) (*this)(b);
  }
};

}  // namespace

std::vector<preset::Gaussian> expand_random_bumps(const Grid& g, const preset::RandomBumps& p) {
  if (p.count < 1) throw std::invalid_argument("random_bumps needs at least one bump");
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double smin = 2.0 * g.h;
  const double smax = std::max(smin, g.L / 8.0);
  std::vector<preset::Gaussian> out;
  out.reserve(p.count);
  for (int b = 0; b < p.count; ++b) {
    preset::Gaussian q;
    q.mass = 0.2 + 0.8 * unit(rng);
    q.sigma = smin + (smax - smin) * unit(rng);
    // Keep four widths between the bump and the wall so truncation stays far
    // below the 0.1% mass tolerance.
    const double reach = std::max(0.0, std::min(0.25 * g.L, 0.5 * g.L - 4.0 * q.sigma));
    for (double& c : q.center) c = reach * (2.0 * unit(rng) - 1.0);
    out.push_back(q);
  }
  return out;
}

double preset_mass(const Grid& g, const Preset& p) {
  struct Mass {
    const Grid& g;
    double operator()(const preset::Gaussian& q) const { return q.mass; }
    double operator()(const preset::Spike& q) const { return q.mass; }
    double operator()(const preset::TwoBumps& q) const { return q.first.mass + q.second.mass; }
    double operator()(const preset::AnisotropicGaussian& q) const { return q.mass; }
    double operator()(const preset::RandomBumps& q) const {
      double m = 0.0;
      for (const auto& b : expand_random_bumps(g, q)) m += b.mass;
      return m;
    }
  };
  return std::visit(Mass{g}, p);
}

ScalarField sample_preset(const Grid& g, const Preset& p) {
  ScalarField f(g);
  std::visit(Sampler{g, f}, p);
  check_mass(f, preset_mass(g, p));
  return f;
}

ScalarField random_family_member(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const int count = 1 + static_cast<int>(rng() % 5);
  return sample_preset(g, preset::RandomBumps{seed, count});
}

}  // namespace landau
