#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "landau/grid.hpp"

namespace landau {

using Point3 = std::array<double, 3>;

namespace preset {

struct Gaussian {
  double mass = 1.0;
  double sigma = 1.0;
  Point3 center{0.0, 0.0, 0.0};
};

/// Narrow centred Gaussian of width `width_cells * h`; the grid-level proxy
/// for rough integrable data.
struct Spike {
  double mass = 1.0;
  double width_cells = 3.0;
};

struct TwoBumps {
  Gaussian first;
  Gaussian second;
};

struct AnisotropicGaussian {
  double mass = 1.0;
  Point3 sigma{1.0, 1.0, 1.0};
  Point3 center{0.0, 0.0, 0.0};
};

/// `count` Gaussians with widths in [2h, L/8], centres in the inner half-box
/// and masses in [0.2, 1], drawn from a seeded mt19937_64.
struct RandomBumps {
  std::uint64_t seed = 0;
  int count = 3;
};

}  // namespace preset

using Preset =
    std::variant<preset::Gaussian, preset::Spike, preset::TwoBumps, preset::AnisotropicGaussian, preset::RandomBumps>;

/// Samples the preset at cell centres (no renormalisation).
///
/// Rejects widths below 2h, centres outside the inner half-box
/// (|c_i| > L/4), and any sample whose discrete mass misses the requested
/// mass by more than 0.1% because the box truncates its tails.
ScalarField sample_preset(const Grid& g, const Preset& p);

/// Requested total mass of a preset.
double preset_mass(const Grid& g, const Preset& p);

/// Expands a RandomBumps preset into its Gaussians.
std::vector<preset::Gaussian> expand_random_bumps(const Grid& g, const preset::RandomBumps& p);

/// Sum-of-Gaussians family member used by the inequality checks: 1 to 5
/// bumps, seeded.
ScalarField random_family_member(const Grid& g, std::uint64_t seed);

}  // namespace landau
