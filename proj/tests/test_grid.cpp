#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "landau/grid.hpp"
#include "landau/presets.hpp"
#include "landau/snapshot.hpp"

using namespace landau;

TEST_SUITE("grid") {
  TEST_CASE("spacing and cell centres") {
    const Grid g = make_grid(8, 8.0);
    CHECK(g.h == 1.0);
    CHECK(g.center(0) == -3.5);
    CHECK(make_grid(64, 16.0).h == 0.25);
    CHECK(g.index(1, 2, 3) == 1 + 8 * (2 + 8 * 3));
  }

  TEST_CASE("invalid grids are rejected") {
    CHECK_THROWS_WITH_AS(make_grid(7, 8.0), doctest::Contains("even"), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(6, 8.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(8, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(require_same_grid(make_grid(8, 8.0), make_grid(8, 4.0)), GridMismatch);
  }

  TEST_CASE("integrate") {
    const Grid g = make_grid(8, 8.0);
    CHECK(integrate(ScalarField(g)) == 0.0);
    CHECK(integrate(ScalarField(g, 2.0)) == doctest::Approx(1024.0).epsilon(1e-15));
    const Grid g64 = make_grid(64, 16.0);
    CHECK(integrate(sample_preset(g64, preset::Gaussian{})) == doctest::Approx(1.0).epsilon(1e-3));
  }

  TEST_CASE("pairwise sum is order-fixed and accurate") {
    std::vector<double> v(1 << 20, 0.1);
    CHECK(pairwise_sum(v) == doctest::Approx(0.1 * (1 << 20)).epsilon(1e-14));
    CHECK(pairwise_sum({}) == 0.0);
  }

  TEST_CASE("gradient of constant, linear and quadratic data") {
    const Grid g = make_grid(16, 4.0);
    const VectorField zero = gradient(ScalarField(g, 3.0));
    for (const auto& c : zero.comp)
      for (double x : c) CHECK(x == 0.0);
    // Second-order stencils, one-sided ones included, are exact on quadratics.
    const VectorField lin = gradient(sample(g, [](double x, double, double) { return x; }));
    const VectorField quad = gradient(sample(g, [](double, double y, double z) { return y * y - 2.0 * z; }));
    for_each_cell(g, [&](int, int j, int, std::size_t idx) {
      CHECK(lin.comp[0][idx] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(lin.comp[1][idx]) < 1e-12);
      CHECK(quad.comp[1][idx] == doctest::Approx(2.0 * g.center(j)).epsilon(1e-11));
      CHECK(quad.comp[2][idx] == doctest::Approx(-2.0).epsilon(1e-12));
    });
  }

  TEST_CASE("gradient of a Gaussian converges at second order") {
    auto error = [](int n) {
      const Grid g = make_grid(n, 12.0);
      auto f = [](double x, double y, double z) { return std::exp(-0.5 * (x * x + y * y + z * z)); };
      const VectorField grad = gradient(sample(g, f));
      double worst = 0.0;
      for_each_cell(g, [&](int i, int j, int k, std::size_t idx) {
        const double x = g.center(i);
        worst = std::max(worst, std::abs(grad.comp[0][idx] + x * f(x, g.center(j), g.center(k))));
      });
      return worst;
    };
    const double order = std::log2(error(64) / error(128));
    CHECK(order > 1.9);
  }

  TEST_CASE("boundary mass fraction") {
    const Grid g = make_grid(32, 8.0);
    CHECK(boundary_mass_fraction(ScalarField(g), 4) == 0.0);
    // Shell of 4 cells on a 32-cell axis: the interior holds (24/32)^3 of the volume.
    CHECK(boundary_mass_fraction(ScalarField(g, 1.0), 4) == doctest::Approx(1.0 - 0.421875).epsilon(1e-14));
    CHECK_THROWS_AS(boundary_mass_fraction(ScalarField(g, 1.0), 8), std::invalid_argument);
    const Grid g64 = make_grid(64, 16.0);
    CHECK(boundary_mass_fraction(sample_preset(g64, preset::Gaussian{1.0, 0.5, {}}), 4) < 1e-8);
  }
}

TEST_SUITE("presets") {
  TEST_CASE("Gaussian and spike sampling") {
    const Grid g = make_grid(64, 16.0);
    const ScalarField spike = sample_preset(g, preset::Spike{1.0, 3.0});
    const double s = 3.0 * g.h;
    // Centre cells sit at (h/2, h/2, h/2) from the origin.
    const double centre = std::pow(2.0 * std::numbers::pi * s * s, -1.5) * std::exp(-0.5 * 3.0 * 0.25 * g.h * g.h / (s * s));
    CHECK(spike.max_value() == doctest::Approx(centre).epsilon(1e-12));
    CHECK(integrate(spike) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(preset_mass(g, preset::Spike{2.5, 3.0}) == 2.5);
  }

  TEST_CASE("random bumps are deterministic") {
    const Grid g = make_grid(32, 16.0);
    const ScalarField a = sample_preset(g, preset::RandomBumps{7, 4});
    const ScalarField b = sample_preset(g, preset::RandomBumps{7, 4});
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    const ScalarField c = random_family_member(g, 11), d = random_family_member(g, 11);
    CHECK(std::equal(c.values().begin(), c.values().end(), d.values().begin()));
    CHECK(c.min_value() >= 0.0);
  }

  TEST_CASE("bad presets are rejected") {
    const Grid g = make_grid(32, 16.0);
    CHECK_THROWS_AS(sample_preset(g, preset::Spike{1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(sample_preset(g, preset::Gaussian{1.0, 1.0, {5.0, 0.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(sample_preset(g, preset::Gaussian{1.0, 4.0, {}}), std::invalid_argument);
  }
}

TEST_SUITE("snapshot") {
  TEST_CASE("round trip, corruption and grid mismatch") {
    const auto dir = std::filesystem::temp_directory_path() / "landau_snapshot_test";
    std::filesystem::create_directories(dir);
    const Grid g = make_grid(8, 4.0);
    const ScalarField u = sample(g, [](double x, double y, double z) { return std::sin(x) + y * z; });
    const auto path = dir / "u.bin";
    save_snapshot(u, path, 1.5, "u");
    const Snapshot back = load_snapshot(path);
    CHECK(back.field.grid() == g);
    CHECK(back.meta.time == 1.5);
    CHECK(std::equal(u.values().begin(), u.values().end(), back.field.values().begin()));

    // A sidecar claiming another grid no longer matches the payload size.
    const auto sidecar = sidecar_path(path);
    std::stringstream text;
    text << std::ifstream(sidecar).rdbuf();
    auto meta = nlohmann::json::parse(text.str());
    meta["n"] = 10;
    std::ofstream(sidecar) << meta.dump();
    CHECK_THROWS_AS(load_snapshot(path), GridMismatch);

    save_snapshot(u, path, 1.5, "u");
    {
      std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
      f.seekp(17);
      f.put('\x5a');
    }
    CHECK_THROWS_AS(load_snapshot(path), SnapshotError);
    std::filesystem::remove_all(dir);
  }
}
