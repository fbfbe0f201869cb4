#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "landau/config.hpp"
#include "landau/harness.hpp"

using namespace landau;
using nlohmann::json;

TEST_SUITE("harness") {
  TEST_CASE("decay-rate fits") {
    const std::vector<double> t{1.0, 2.0, 4.0, 8.0, 16.0};
    std::vector<double> v;
    for (double s : t) v.push_back(std::pow(s, -0.5));
    const RateFit f = fit_decay_rate(t, v, {1.0, 16.0});
    CHECK(std::abs(f.slope + 0.5) <= 1e-12);
    CHECK(f.samples == 5);
    CHECK(f.residual_rms < 1e-14);
    CHECK(std::abs(fit_decay_rate(t, std::vector<double>(5, 3.0), {1.0, 16.0}).slope) <= 1e-15);
    CHECK_THROWS_AS(fit_decay_rate(t, v, {2.0, 16.0}), std::invalid_argument);
    std::vector<double> neg = v;
    neg[2] = 0.0;
    CHECK_THROWS_AS(fit_decay_rate(t, neg, {1.0, 16.0}), std::invalid_argument);
  }

  TEST_CASE("summary items and exit code") {
    SummaryReport r;
    CHECK(r.items().size() == kAcceptanceItems);
    CHECK_FALSE(r.all_pass());  // nothing evaluated
    r.record(3, true, {{"run", "a"}});
    CHECK(r.all_pass());
    CHECK(r.exit_code() == 0);
    r.record(3, false, {{"run", "b"}});
    CHECK(r.item(3).status == ItemStatus::fail);
    CHECK(r.exit_code() == 1);
    CHECK_THROWS_AS(r.record(13, true, {}), std::out_of_range);

    const json j = r.to_json();
    REQUIRE(j.at("items").size() == kAcceptanceItems);
    for (int i = 0; i < kAcceptanceItems; ++i) CHECK(j.at("items")[i].at("id") == i + 1);
    CHECK(j.at("items")[2].at("status") == "fail");
    CHECK(j.at("items")[0].at("status") == "not_evaluated");
    CHECK(headline(r.item(3)).rfind("FAIL  3", 0) == 0);

    SummaryReport a, b;
    a.record(1, true, {});
    b.experiment = "sub";
    b.record(1, false, {});
    b.add_file("x.csv");
    a.merge(b);
    CHECK(a.item(1).status == ItemStatus::fail);
    CHECK(a.item(1).evidence.size() == 2);
    CHECK(a.files() == std::vector<std::string>{"sub/x.csv"});
  }

  TEST_CASE("window clipping") {
    Trajectory traj;
    traj.first_dt = 0.01;
    for (double t : {0.1, 0.5, 1.0, 2.0, 4.0}) traj.records.push_back([t] { DiagnosticsRecord r; r.t = t; return r; }());
    auto w = clip_window(traj, {0.05, 4.0}, {0.0, 0.0, 0.0, 2e-4, 1e-3}, 1e-4);
    REQUIRE(w);
    CHECK(w->t_a == doctest::Approx(0.1));
    CHECK(w->t_b == 1.0);
    CHECK_FALSE(clip_window(traj, {0.5, 4.0}, {1e-3, 1e-3, 1e-3, 1e-3, 1e-3}, 1e-4));
    CHECK_FALSE(clip_window(traj, {2.0, 4.0}, {0.0, 0.0, 0.0, 2e-4, 1e-3}, 1e-4));
    CHECK_THROWS_AS(clip_window(traj, {0.5, 4.0}, {0.0}, 1e-4), std::invalid_argument);
  }

  TEST_CASE("moment forcing fit") {
    // y = 1 + 1.5 C t^{2/3} solves y' = C t^{-1/3} with c = 0.
    std::vector<double> t{0.0}, y{1.0};
    for (int i = 1; i <= 50; ++i) {
      t.push_back(0.2 * i);
      y.push_back(1.0 + 1.5 * 0.8 * std::pow(t.back(), 2.0 / 3.0));
    }
    const double C = checks::fit_moment_forcing(t, y, 0.0);
    CHECK(C >= 0.8 * 0.999);
    CHECK(C <= 0.8 * 1.2);
    CHECK(checks::fit_moment_forcing({0.0, 1.0}, {2.0, 1.0}, 0.0) == 0.0);
    CHECK_THROWS_AS(checks::fit_moment_forcing({0.0, 0.0}, {1.0, 1.0}, 0.0), std::invalid_argument);
  }

  TEST_CASE("ellipticity check") {
    Trajectory traj;
    for (double f : {1.0, 0.5, 0.2}) traj.records.push_back([f] { DiagnosticsRecord r; r.ellipticity_floor = f; return r; }());
    bool ok = false;
    checks::ellipticity(traj, 1.0, 10.0, ok);
    CHECK(ok);
    checks::ellipticity(traj, 3.0, 10.0, ok);
    CHECK_FALSE(ok);
    traj.records.push_back(DiagnosticsRecord{});
    checks::ellipticity(traj, 1.0, 10.0, ok);
    CHECK_FALSE(ok);
  }

  TEST_CASE("small lp_decay run writes its outputs") {
    const auto dir = std::filesystem::temp_directory_path() / "landau_harness_test";
    std::filesystem::remove_all(dir);
    ExperimentConfig c = config_from_json(json::parse(R"({
      "experiment": "lp_decay",
      "solver": {"n": 32, "L": 16.0, "T": 2.0, "dt_max": 0.01, "p_list": [2.0], "m_list": [2.0],
                 "initial": {"type": "spike", "mass": 1.0, "width_cells": 2.0}},
      "fit_window": [0.2, 2.0], "sample_first": 0.05, "per_decade": 16
    })"));
    c.output_dir = dir;
    const SummaryReport r = run_experiment(c);
    CHECK(r.item(6).status != ItemStatus::not_evaluated);
    CHECK(r.item(3).status == ItemStatus::pass);
    CHECK(r.item(1).status == ItemStatus::not_evaluated);
    for (const char* f : {"diagnostics.csv", "summary.json", "checks/lp_decay.json"})
      CHECK(std::filesystem::exists(dir / f));
    std::ifstream in(dir / "summary.json");
    const json s = json::parse(in);
    CHECK(s.at("items").size() == kAcceptanceItems);
    CHECK(s.at("experiment") == "lp_decay");
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("heat against heat is a zero-gap control") {
    ExperimentConfig c = default_config(Experiment::heat_comparison);
    c.solver.n = 32;
    c.solver.L = 16.0;
    c.solver.T = 1.0;
    c.solver.mode = Mode::heat_baseline;
    c.solver.sample_times = log_spaced_times(0.2, 1.0, 16);
    const Trajectory a = run(c.solver), b = run(c.solver);
    const FitWindow w{0.2, 1.0};
    CHECK(fit_decay_rate(a.times(), a.column("lp2"), w).slope ==
          fit_decay_rate(b.times(), b.column("lp2"), w).slope);
  }
}
