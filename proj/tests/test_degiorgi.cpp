#include <cmath>

#include "doctest.h"
#include "landau/degiorgi.hpp"
#include "landau/functionals.hpp"
#include "landau/presets.hpp"

using namespace landau;

TEST_SUITE("degiorgi") {
  TEST_CASE("worked parameter values") {
    const DeGiorgiParams p = parameters(3, 3.0, 27.0);
    REQUIRE(p.valid);
    CHECK(std::abs(p.gamma - 7.0 / 9.0) <= 1e-12);
    CHECK(std::abs(p.beta1 - 5.0 / 9.0) <= 1e-12);
    CHECK(std::abs(p.epsilon - 0.1875) <= 1e-12);
    CHECK(p.epsilon <= (p.d - 2.0) / (p.p + 1.0));
  }

  TEST_CASE("invalid parameters name the violated constraint") {
    const DeGiorgiParams a = parameters(3, 2.0, 9.0);
    CHECK_FALSE(a.valid);
    CHECK(a.m_min == doctest::Approx(9.0));
    CHECK(a.reason.find("m") != std::string::npos);
    CHECK_FALSE(parameters(3, 1.2, 100.0).valid);
    CHECK_FALSE(parameters(2, 3.0, 100.0).valid);
    CHECK_NOTHROW(parameters(1, -1.0, 0.0));
  }

  TEST_CASE("gamma tends to 2p/d - 1 as m grows") {
    CHECK(parameters(3, 4.0, 1e12).gamma == doctest::Approx(8.0 / 3.0 - 1.0).epsilon(1e-10));
  }

  TEST_CASE("valid parameters have positive exponents and bounded epsilon") {
    for (double p : {2.0, 3.0, 5.0, 8.0})
      for (double m : {20.0, 30.0, 60.0, 200.0}) {
        const DeGiorgiParams q = parameters(3, p, m);
        if (!q.valid) continue;
        CHECK(q.gamma > 0.0);
        CHECK(q.beta1 > 0.0);
        CHECK(q.epsilon > 0.0);
        if (m > 9.0) CHECK(q.epsilon <= 1.0 / (p + 1.0) + 1e-15);
      }
  }

  TEST_CASE("dyadic schedule") {
    const LevelSchedule s = schedule(1.0, 1.0, 3);
    CHECK(s.C == std::vector<double>{0.0, 0.5, 0.75, 0.875});
    CHECK(s.T == std::vector<double>{0.0, 0.25, 0.375, 0.4375});
    const LevelSchedule r = schedule(3.0, 8.0, 8);
    for (int k = 1; k <= 8; ++k) {
      CHECK(r.C[k] - r.C[k - 1] == doctest::Approx(3.0 * std::pow(2.0, -k)).epsilon(1e-15));
      if (k < 8) CHECK(r.T[k + 1] - r.T[k] == doctest::Approx(8.0 * std::pow(2.0, -(k + 2))).epsilon(1e-15));
    }
    CHECK_THROWS_AS(schedule(0.0, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(schedule(1.0, -1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(schedule(1.0, 1.0, 0), std::invalid_argument);
  }

  TEST_CASE("truncation") {
    const Grid g = make_grid(16, 8.0);
    const ScalarField u = random_family_member(g, 3);
    const ScalarField t0 = truncate(u, 0.0);
    CHECK(std::equal(u.values().begin(), u.values().end(), t0.values().begin()));
    for (double x : truncate(u, linf_norm(u)).values()) CHECK(x == 0.0);
    const LevelSchedule s = schedule(linf_norm(u), 1.0, 8);
    for (int k = 1; k <= 8; ++k)
      for (double a : {0.5, 1.0, 2.0})
        for (std::size_t c = 0; c < u.size(); ++c) {
          const double lhs = std::max(u[c] - s.C[k], 0.0);
          const double rhs = std::pow(std::max(u[c] - s.C[k - 1], 0.0), 1.0 + a) / std::pow(s.C[k] - s.C[k - 1], a);
          CHECK(lhs <= rhs + 1e-13 * std::max(lhs, rhs));
        }
  }

  TEST_CASE("energies") {
    const Grid g = make_grid(16, 8.0);
    const LevelSchedule sched = schedule(1.0, 4.0, 4);
    std::vector<EnergySample> zero, bump;
    for (int i = 1; i <= 20; ++i) {
      const double tau = 1.0 + 3.0 * i / 20.0;
      zero.push_back({tau, 0.15, ScalarField(g), std::nullopt});
      // A decaying bump whose peak stays above M / 2.
      ScalarField u = sample_preset(g, preset::Gaussian{1.0 / tau, 1.0, {}});
      u *= 1.0 / (u.max_value() * (0.5 + 0.4 / tau));
      bump.push_back({tau, 0.15, std::move(u), std::nullopt});
    }
    const EnergySeries z = energies(zero, sched, 3.0);
    for (double e : z.E) CHECK(e == 0.0);
    CHECK(z.samples == 20);

    const EnergySeries b = energies(bump, sched, 3.0);
    REQUIRE(b.E.size() == 5);
    for (int k = 1; k <= 4; ++k) CHECK(b.E[k] <= b.E[k - 1]);
    CHECK(b.E[0] > 0.0);
    CHECK(b.E_A.empty());

    std::vector<EnergySample> few(bump.begin(), bump.begin() + 10);
    CHECK_THROWS_AS(energies(few, sched, 3.0), std::runtime_error);
    CHECK(default_energy_constant(3.0) == doctest::Approx(8.0 / 3.0));
  }

  TEST_CASE("accumulator ignores samples outside (t/4, t]") {
    const Grid g = make_grid(8, 8.0);
    EnergyAccumulator acc(schedule(1.0, 4.0, 2), 2.0);
    const ScalarField u(g, 0.5);
    acc.add(0.5, 0.1, u);
    acc.add(1.0, 0.1, u);
    acc.add(4.5, 0.1, u);
    CHECK_THROWS_AS(acc.finish(), std::runtime_error);
    for (int i = 0; i < 16; ++i) acc.add(1.1 + 0.1 * i, 0.1, u);
    CHECK(acc.finish().samples == 16);
  }

  TEST_CASE("recursion report") {
    const DeGiorgiParams p = parameters(3, 3.0, 27.0);
    EnergySeries zero;
    zero.E.assign(9, 0.0);
    const RecursionReport empty = recursion_report(zero, p, 1.0, 8.0);
    CHECK(empty.levels.empty());
    CHECK_FALSE(empty.growth_exponent);
    CHECK_THROWS_AS(recursion_report(zero, parameters(3, 2.0, 9.0), 1.0, 8.0), std::invalid_argument);

    EnergySeries s;
    s.E = {1.0, 0.5, 0.2, 0.05, 0.0};
    const RecursionReport r = recursion_report(s, p, 2.0, 8.0);
    REQUIRE(r.levels.size() == 4);
    const double expect = 0.5 * 8.0 * std::pow(2.0, 1.0 + p.gamma) / std::pow(1.0, 1.0 + p.beta1);
    CHECK(r.levels[0].kappa == doctest::Approx(expect).epsilon(1e-14));
  }

  TEST_CASE("super-geometric growth exponent of a synthetic series") {
    const double b = 1.0 + 5.0 / 9.0;
    std::vector<double> E;
    for (int k = 0; k <= 8; ++k) E.push_back(2.0 * std::pow(0.3, std::pow(b, k)));
    const auto fit = fit_growth_exponent(E);
    REQUIRE(fit);
    CHECK(std::abs(*fit - b) <= 1e-6);
    CHECK_FALSE(fit_growth_exponent({1.0, 0.5}));
  }
}
