#include <cmath>
#include <numbers>

#include "doctest.h"
#include "landau/functionals.hpp"
#include "landau/kernel.hpp"
#include "landau/presets.hpp"

using namespace landau;

namespace {

const Grid& grid64() {
  static const Grid g = make_grid(64, 16.0);
  return g;
}

}  // namespace

TEST_SUITE("functionals") {
  TEST_CASE("norms of simple fields") {
    const Grid g = make_grid(8, 8.0);
    CHECK(lp_norm(ScalarField(g, 0.5), 1.0) == doctest::Approx(0.5 * 512.0));
    CHECK_THROWS_AS(lp_norm(ScalarField(g), 0.5), std::invalid_argument);
    CHECK(lp_power(ScalarField(g, 2.0), 3.0) == doctest::Approx(8.0 * 512.0));
    const ScalarField u = sample_preset(grid64(), preset::Gaussian{});
    CHECK(lp_norm(u, 2.0) == doctest::Approx(std::pow(4.0 * std::numbers::pi, -0.75)).epsilon(1e-3));
    const ScalarField spike = sample_preset(grid64(), preset::Spike{});
    CHECK(linf_norm(spike) == spike.at(32, 32, 32));
  }

  TEST_CASE("weighted moments") {
    const ScalarField u = sample_preset(grid64(), preset::Gaussian{});
    CHECK(weighted_l1m(u, 0.0) == doctest::Approx(lp_norm(u, 1.0)).epsilon(1e-14));
    CHECK(weighted_l1m(u, 2.0) == doctest::Approx(4.0).epsilon(1e-2));
    CHECK(weighted_l1m(ScalarField(grid64()), 2.0) == 0.0);
  }

  TEST_CASE("entropy") {
    const ScalarField u = sample_preset(grid64(), preset::Gaussian{});
    CHECK(entropy(u) == doctest::Approx(-1.5 * (1.0 + std::log(2.0 * std::numbers::pi))).epsilon(1e-2));
    CHECK(entropy(ScalarField(make_grid(8, 8.0), 1.0)) == 0.0);
    const double mass = integrate(u);
    CHECK(entropy(2.0 * u) == doctest::Approx(2.0 * entropy(u) + 2.0 * mass * std::log(2.0)).epsilon(1e-12));
  }

  TEST_CASE("dissipation") {
    const Grid g = make_grid(16, 8.0);
    const SymMatrixField I = SymMatrixField::identity(g);
    CHECK(dissipation(ScalarField(g, 3.0), 2.0, I) == 0.0);
    CHECK(weighted_grad_energy(ScalarField(g, 3.0), -3.0) == 0.0);
    const ScalarField u = sample_preset(g, preset::Gaussian{1.0, 1.0, {}});
    CHECK(dissipation(u, 2.0, I) == doctest::Approx(weighted_grad_energy(u, 0.0)).epsilon(1e-13));
  }

  TEST_CASE("reports and the 0/0 convention") {
    CHECK(make_report("x", 0.0, 0.0, 1.0).pass);
    CHECK(make_report("x", 0.0, 0.0, 1.0).ratio == 0.0);
    const InequalityReport bad = make_report("x", 1.0, 0.0, 1.0);
    CHECK(std::isinf(bad.ratio));
    CHECK_FALSE(bad.pass);
    CHECK(make_report("x", 2.0, 4.0, 1.0).ratio == 0.5);
    CHECK(make_report("x", 2.0, 4.0, 1.0).to_json().at("ratio") == 0.5);
  }

  TEST_CASE("Poincare ratio scalings") {
    const Grid& g = grid64();
    const KernelTable t = build_kernel_table(g, kDefaultCd, KernelSet::matrix);
    ConvolutionPlan plan(g);
    const ScalarField u = sample_preset(g, preset::Gaussian{1.0, 1.5, {}});
    const ScalarField u10 = sample_preset(g, preset::Gaussian{10.0, 1.5, {}});
    const double sweep[] = {0.5 * kDefaultCd, kDefaultCd, 1.0};
    const auto r1 = check_poincare_gks(u, 2.0, compute_A(u, t, plan), kDefaultCd, sweep);
    const auto r10 = check_poincare_gks(u10, 2.0, compute_A(u10, t, plan), kDefaultCd, sweep);
    for (int i = 0; i < 3; ++i) {
      CHECK(r10[i].ratio == doctest::Approx(r1[i].ratio).epsilon(1e-12));
      CHECK(r1[i].ratio * sweep[i] == doctest::Approx(r1[0].ratio * sweep[0]).epsilon(1e-13));
    }
    const ScalarField zero(g);
    CHECK(check_poincare_gks(zero, 2.0, compute_A(zero, t, plan), kDefaultCd, sweep)[0].pass);
    CHECK_THROWS_AS(check_poincare_gks(u, 1.0, compute_A(u, t, plan), kDefaultCd, sweep), std::invalid_argument);
  }

  TEST_CASE("weighted Sobolev terms") {
    const Grid g = make_grid(32, 16.0);
    const ScalarField f = sample_preset(g, preset::Gaussian{1.0, 1.0, {}});
    const InequalityReport r1 = check_weighted_sobolev(f, 2.0);
    const InequalityReport r3 = check_weighted_sobolev(3.0 * f, 2.0);
    CHECK(r3.lhs == doctest::Approx(9.0 * r1.lhs).epsilon(1e-12));
    CHECK(r3.params.at("grad") == doctest::Approx(9.0 * r1.params.at("grad")).epsilon(1e-12));
    CHECK(r3.params.at("ls") == doctest::Approx(9.0 * r1.params.at("ls")).epsilon(1e-12));
    CHECK(std::isfinite(r1.ratio));
    CHECK(check_weighted_sobolev(ScalarField(g), 2.0).lhs == 0.0);
    CHECK_THROWS_AS(check_weighted_sobolev(f, 7.0), std::invalid_argument);
  }

  TEST_CASE("interpolation exponents and ratios") {
    CHECK(interpolation_moment(2.0, 3.0) == doctest::Approx(9.0));
    CHECK_THROWS_AS(interpolation_moment(2.0, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(interpolation_moment(2.0, 3.4), std::invalid_argument);
    const Grid g = make_grid(32, 16.0);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const ScalarField f = random_family_member(g, s);
      CHECK(check_interpolation_star(f, 2.0, 3.0).ratio <= 1.0 + 1e-6);
      CHECK(check_interpolation_star(f, 3.0, 4.0).ratio <= 1.0 + 1e-6);
      CHECK(std::isfinite(check_interpolation_full(f, 2.0, 3.0).ratio));
    }
    CHECK(check_interpolation_star(ScalarField(g), 2.0, 3.0).ratio == 0.0);
    CHECK(check_interpolation_full(ScalarField(g), 2.0, 3.0).pass);
    // Both sides of the full inequality carry the same power of a scale factor.
    const ScalarField f = random_family_member(g, 9);
    CHECK(check_interpolation_full(5.0 * f, 2.0, 3.0).ratio ==
          doctest::Approx(check_interpolation_full(f, 2.0, 3.0).ratio).epsilon(1e-12));
  }

  TEST_CASE("coefficient bound ratios") {
    const Grid g = make_grid(32, 16.0);
    const KernelTable t = build_kernel_table(g);
    ConvolutionPlan plan(g);
    const ScalarField u = sample_preset(g, preset::Gaussian{1.0, 1.5, {}});
    const ScalarField v = 7.0 * u;
    CHECK(lemma21_A_ratio(v, 2.0, compute_A(v, t, plan)).ratio ==
          doctest::Approx(lemma21_A_ratio(u, 2.0, compute_A(u, t, plan)).ratio).epsilon(1e-12));
    CHECK(lemma21_divA_ratio(v, 4.0, compute_divA(v, t, plan)).ratio ==
          doctest::Approx(lemma21_divA_ratio(u, 4.0, compute_divA(u, t, plan)).ratio).epsilon(1e-12));
    CHECK_THROWS_AS(lemma21_divA_ratio(u, 2.0, compute_divA(u, t, plan)), std::invalid_argument);
    CHECK_THROWS_AS(lemma21_A_ratio(u, 1.5, compute_A(u, t, plan)), std::invalid_argument);
  }
}
