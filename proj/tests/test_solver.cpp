#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "landau/functionals.hpp"
#include "landau/harness.hpp"
#include "landau/presets.hpp"
#include "landau/solver.hpp"

using namespace landau;

namespace {

SymMatrixField random_spd(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  SymMatrixField A(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    A.comp[0][i] = 1.0 + u(rng);
    A.comp[1][i] = 1.5 + u(rng);
    A.comp[2][i] = 1.2 + u(rng);
    for (int c = 3; c < 6; ++c) A.comp[c][i] = 0.5 * u(rng);
  }
  return A;
}

ScalarField random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScalarField f(g);
  for (double& x : f.values()) x = u(rng);
  return f;
}

}  // namespace

TEST_SUITE("diffusion operator") {
  TEST_CASE("constant data has zero tendency") {
    const Grid g = make_grid(8, 4.0);
    for (auto s : {CrossStencil::average, CrossStencil::limited}) {
      const ScalarField r = apply_diffusion(ScalarField(g, 2.0), random_spd(g, 1), s);
      for (double x : r.values()) CHECK(x == 0.0);
    }
  }

  TEST_CASE("fluxes telescope") {
    const Grid g = make_grid(16, 4.0);
    const ScalarField u = random_field(g, 2);
    const SymMatrixField A = random_spd(g, 3);
    for (auto s : {CrossStencil::average, CrossStencil::limited}) {
      const ScalarField r = apply_diffusion(u, A, s);
      double total = 0.0, scale = 0.0;
      for (double x : r.values()) {
        total += x;
        scale += std::abs(x);
      }
      CHECK(std::abs(total) <= 1e-13 * scale);
    }
  }

  TEST_CASE("identity coefficient gives the 7-point Laplacian") {
    const Grid g = make_grid(12, 3.0);
    const ScalarField u = random_field(g, 4);
    const ScalarField r = apply_diffusion(u, SymMatrixField::identity(g));
    const double h2 = g.h * g.h;
    for (int k = 1; k < g.n - 1; ++k)
      for (int j = 1; j < g.n - 1; ++j)
        for (int i = 1; i < g.n - 1; ++i) {
          const double lap = (u.at(i + 1, j, k) + u.at(i - 1, j, k) + u.at(i, j + 1, k) + u.at(i, j - 1, k) +
                              u.at(i, j, k + 1) + u.at(i, j, k - 1) - 6.0 * u.at(i, j, k)) /
                             h2;
          CHECK(r.at(i, j, k) == doctest::Approx(lap).epsilon(1e-12));
        }
  }

  TEST_CASE("limited and averaged cross terms agree on linear data") {
    // div(A grad u) = 0 for constant A and linear u away from the walls.
    const Grid g = make_grid(12, 3.0);
    const ScalarField u = sample(g, [](double x, double y, double z) { return 1.0 + 0.3 * x - 0.7 * y + 0.2 * z; });
    SymMatrixField A(g);
    const double a[6] = {1.0, 2.0, 1.5, 0.4, -0.3, 0.2};
    for (int c = 0; c < 6; ++c) A.comp[c].assign(g.size(), a[c]);
    const ScalarField avg = apply_diffusion(u, A, CrossStencil::average);
    const ScalarField lim = apply_diffusion(u, A, CrossStencil::limited);
    for (int k = 2; k < g.n - 2; ++k)
      for (int j = 2; j < g.n - 2; ++j)
        for (int i = 2; i < g.n - 2; ++i) {
          CHECK(std::abs(avg.at(i, j, k)) < 1e-12);
          CHECK(lim.at(i, j, k) == doctest::Approx(avg.at(i, j, k)).epsilon(1e-12));
        }
  }

  TEST_CASE("CFL step") {
    const Grid g = make_grid(64, 16.0);
    SymMatrixField I = SymMatrixField::identity(g);
    CHECK(cfl_dt(I, 0.25, 0.5, 1.0) == doctest::Approx(0.5 * 0.0625 / 6.0).epsilon(1e-14));
    I *= 2.0;
    CHECK(cfl_dt(I, 0.25, 0.5, 1.0) == doctest::Approx(0.5 * 0.0625 / 12.0).epsilon(1e-14));
    CHECK(cfl_dt(SymMatrixField(g), 0.25, 0.5, 0.75) == 0.75);
  }
}

TEST_SUITE("solver") {
  TEST_CASE("config validation") {
    SolverConfig c;
    c.n = 16;
    c.L = 8.0;
    c.initial = preset::Gaussian{};
    CHECK_NOTHROW(c.validate());
    SolverConfig bad = c;
    bad.cfl = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.T = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.p_list = {0.5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }

  TEST_CASE("one step conserves mass and keeps zero at zero") {
    SolverConfig c;
    c.n = 24;
    c.L = 12.0;
    c.initial = preset::Gaussian{1.0, 1.0, {}};
    Solver s(c);
    const double m0 = integrate(s.state());
    const StepReport r = s.step(1.0);
    CHECK(r.dt > 0.0);
    CHECK(std::abs(integrate(s.state()) - m0) <= 1e-12 * m0);
    s.reset(ScalarField(make_grid(24, 12.0)));
    s.step(1.0);
    for (double x : s.state().values()) CHECK(x == 0.0);
  }

  TEST_CASE("heat mode spreads a Gaussian like the heat kernel") {
    SolverConfig c;
    c.n = 32;
    c.L = 16.0;
    c.initial = preset::Gaussian{1.0, 1.0, {}};
    c.mode = Mode::heat_baseline;
    c.T = 0.5;
    c.m_list = {2.0};
    const Trajectory traj = run(c);
    // <x>^2 moment of a Gaussian with variance s^2 is 1 + 3 s^2 and s^2 grows by 2t.
    const double expect = 1.0 + 3.0 * (1.0 + 2.0 * c.T);
    CHECK(traj.records.back().l1m[0] == doctest::Approx(expect).epsilon(2e-3));
  }

  TEST_CASE("short horizon yields a single record at T") {
    SolverConfig c;
    c.n = 16;
    c.L = 8.0;
    c.initial = preset::Gaussian{};
    c.T = 1e-6;
    const Trajectory traj = run(c);
    REQUIRE(traj.records.size() == 1);
    CHECK(traj.records[0].t == doctest::Approx(1e-6));
    CHECK(traj.steps == 1);
  }

  TEST_CASE("Landau run: conservation, monotonicity, positive floor") {
    SolverConfig c;
    c.n = 32;
    c.L = 16.0;
    c.initial = preset::Spike{1.0, 2.0};
    c.T = 4.0;
    c.dt_max = 0.02;
    c.p_list = {2.0, 3.0};
    c.m_list = {2.0};
    c.sample_times = log_spaced_times(0.05, c.T, 16);
    const Trajectory traj = run(c);
    CHECK(traj.records.size() > 10);
    CHECK(traj.records.back().t == c.T);
    bool ok = false;
    const auto e = checks::conservation(traj, ok);
    CHECK_MESSAGE(ok, e.dump());
    for (const auto& r : traj.records) {
      CHECK(r.ellipticity_floor > 0.0);
      CHECK(r.min_u >= -1e-8 * r.linf);
    }
  }

  TEST_CASE("heat decay rate from a spike") {
    SolverConfig c;
    c.n = 64;
    c.L = 16.0;
    c.initial = preset::Spike{1.0, 2.0};
    c.mode = Mode::heat_baseline;
    c.T = 1.5;
    c.p_list = {2.0};
    c.sample_times = log_spaced_times(0.5, c.T, 32);
    const Trajectory traj = run(c);
    const auto w = clip_window(traj, {0.5, 1.5}, traj.column("boundary_mass"), 1e-4);
    REQUIRE(w);
    const RateFit f = fit_decay_rate(traj.times(), traj.column("lp2"), *w);
    CHECK(std::abs(f.slope + 0.75) <= 0.15);
  }

  TEST_CASE("diagnostics CSV is reproducible") {
    SolverConfig c;
    c.n = 16;
    c.L = 8.0;
    c.initial = preset::RandomBumps{2, 2};
    c.T = 0.2;
    c.p_list = {2.0, 4.0};
    c.m_list = {2.0, 4.0};
    c.sample_times = log_spaced_times(0.01, c.T, 8);
    const auto dir = std::filesystem::temp_directory_path() / "landau_csv_test";
    std::filesystem::create_directories(dir);
    write_diagnostics_csv(run(c), dir / "a.csv");
    write_diagnostics_csv(run(c), dir / "b.csv");
    auto slurp = [](const std::filesystem::path& p) {
      std::ifstream in(p);
      return std::string(std::istreambuf_iterator<char>(in), {});
    };
    const std::string a = slurp(dir / "a.csv");
    CHECK(a == slurp(dir / "b.csv"));
    CHECK(a.rfind("t,mass,entropy,lp2,lp4,linf,l1m2,l1m4,diss2,diss4,poincare_ratio,ellipticity_floor,min_u,dt\n", 0) == 0);
    std::filesystem::remove_all(dir);
  }
}

TEST_SUITE("envelopes") {
  TEST_CASE("L^p envelope") {
    CHECK(theoretical_lp_envelope(2.0, 1.0, 1.0) == doctest::Approx(std::sqrt(9.0 / 8.0)).epsilon(1e-14));
    CHECK(theoretical_lp_envelope(2.0, 2.0, 3.0) ==
          doctest::Approx(std::sqrt(2.0) * theoretical_lp_envelope(2.0, 1.0, 3.0)).epsilon(1e-14));
    CHECK(theoretical_lp_envelope(3.0, 1.0, 1e-12) > 1e6);
    CHECK_THROWS_AS(theoretical_lp_envelope(1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(theoretical_lp_envelope(2.0, 1.0, 0.0), std::invalid_argument);
  }

  TEST_CASE("moment envelope") {
    CHECK(moment_envelope(2.5, 7.0, 0.0, 0.0) == 2.5);
    // c = 0: y = y0 + (3/2) C t^{2/3}.
    CHECK(moment_envelope(1.0, 8.0, 0.0, 2.0) == doctest::Approx(1.0 + 3.0 * 4.0).epsilon(1e-12));
    // c = C = 1, y0 = 0 against a midpoint rule after s = w^{3/2}, which
    // turns the s^{-1/3} singularity into a bounded integrand.
    const double t = 2.0, W = std::pow(t, 2.0 / 3.0);
    const int steps = 400000;
    double integral = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double w = (i + 0.5) * W / steps;
      integral += 1.5 * std::exp(-3.0 * std::sqrt(w)) * (W / steps);
    }
    CHECK(moment_envelope(0.0, t, 1.0, 1.0) == doctest::Approx(std::exp(3.0 * std::cbrt(t)) * integral).epsilon(1e-8));
    double prev = 0.0;
    for (double s = 0.0; s <= 5.0; s += 0.25) {
      const double y = moment_envelope(0.3, s, 0.7, 0.2);
      CHECK(y >= prev);
      prev = y;
    }
  }

  TEST_CASE("log-spaced sample times") {
    const auto t = log_spaced_times(0.1, 10.0, 4);
    CHECK(t.front() == doctest::Approx(0.1));
    CHECK(t.back() == 10.0);
    CHECK(t.size() == 9);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
  }
}
