#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "landau/config.hpp"
#include "landau/toml_lite.hpp"

using namespace landau;
using nlohmann::json;

TEST_SUITE("toml") {
  TEST_CASE("values, tables and comments") {
    const json j = parse_toml(R"(# experiment
experiment = "lp_decay"   # trailing comment
name = 'literal \n kept'
count = 1_000
ratio = -2.5e-3
big = +inf
flag = true
list = [1, 2.5,
        3]   # spans lines
nested = [[2.0, 3.0], [3.0, 4.0]]
point = { x = 1, y = "two" }
"quoted key" = 4
a.b.c = 5

[solver]
n = 64
initial = { type = "spike", mass = 1.0, width_cells = 3 }

[solver.extra]
dt_max = 10.0
)");
    CHECK(j.at("experiment") == "lp_decay");
    CHECK(j.at("name") == "literal \\n kept");
    CHECK(j.at("count") == 1000);
    CHECK(j.at("ratio").get<double>() == -2.5e-3);
    CHECK(std::isinf(j.at("big").get<double>()));
    CHECK(j.at("flag") == true);
    CHECK(j.at("list") == json::array({1, 2.5, 3}));
    CHECK(j.at("nested")[1][0] == 3.0);
    CHECK(j.at("point").at("y") == "two");
    CHECK(j.at("quoted key") == 4);
    CHECK(j.at("a").at("b").at("c") == 5);
    CHECK(j.at("solver").at("n") == 64);
    CHECK(j.at("solver").at("initial").at("type") == "spike");
    CHECK(j.at("solver").at("extra").at("dt_max") == 10.0);
  }

  TEST_CASE("malformed input") {
    CHECK_THROWS_AS(parse_toml("a = 1\na = 2\n"), TomlError);
    CHECK_THROWS_AS(parse_toml("a = \"open\n"), TomlError);
    CHECK_THROWS_AS(parse_toml("[[runs]]\n"), TomlError);
    CHECK_THROWS_AS(parse_toml("a = [1, 2\n"), TomlError);
    CHECK_THROWS_AS(parse_toml("a 1\n"), TomlError);
    CHECK_THROWS_AS(parse_toml("a = 1 2\n"), TomlError);
    CHECK_THROWS_WITH(parse_toml("x = 1\ny = @\n"), doctest::Contains("line 2"));
  }
}

TEST_SUITE("config") {
  TEST_CASE("experiment names") {
    for (Experiment e : {Experiment::lp_decay, Experiment::linf_decay, Experiment::heat_comparison,
                         Experiment::moments, Experiment::inequalities, Experiment::degiorgi,
                         Experiment::kernel_validate, Experiment::rates, Experiment::all})
      CHECK(experiment_from_string(to_string(e)) == e);
    CHECK_THROWS_AS(experiment_from_string(""), ConfigError);
    CHECK_THROWS_AS(experiment_from_string("nope"), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"experiment", ""}}), ConfigError);
  }

  TEST_CASE("defaults validate") {
    for (Experiment e : {Experiment::lp_decay, Experiment::heat_comparison, Experiment::inequalities,
                         Experiment::degiorgi, Experiment::kernel_validate, Experiment::rates})
      CHECK_NOTHROW(default_config(e).validate());
  }

  TEST_CASE("overrides and preconditions") {
    const ExperimentConfig c = config_from_json(json::parse(R"({
      "experiment": "lp_decay",
      "solver": {"n": 32, "L": 8.0, "T": 2.0, "initial": {"type": "gaussian", "mass": 2.0, "sigma": 1.0}},
      "fit_window": [0.5, 2.0],
      "inequalities": {"pq": [[2.0, 3.0]]}
    })"));
    CHECK(c.solver.n == 32);
    CHECK(c.solver.T == 2.0);
    CHECK(std::get<preset::Gaussian>(c.solver.initial).mass == 2.0);
    CHECK(c.fit_window->t_a == 0.5);
    CHECK(c.inequalities.pq.size() == 1);
    CHECK_NOTHROW(c.validate());

    json bad_window = {{"experiment", "lp_decay"}, {"solver", {{"T", 2.0}}}, {"fit_window", {1.0, 3.0}}};
    CHECK_THROWS_AS(config_from_json(bad_window).validate(), ConfigError);
    json bad_pq = {{"experiment", "inequalities"}, {"inequalities", {{"pq", {{2.0, 2.5}}}}}};
    CHECK_THROWS_AS(config_from_json(bad_pq).validate(), ConfigError);
    json bad_dg = {{"experiment", "degiorgi"}, {"degiorgi", {{"p", 2.0}, {"m", 9.0}}}};
    CHECK_THROWS_AS(config_from_json(bad_dg).validate(), ConfigError);
    json bad_solver = {{"experiment", "lp_decay"}, {"solver", {{"n", 7}}}};
    CHECK_THROWS_AS(config_from_json(bad_solver).validate(), ConfigError);
  }

  TEST_CASE("presets round-trip through JSON") {
    const Preset presets[] = {preset::Gaussian{2.0, 1.5, {0.5, 0.0, -1.0}}, preset::Spike{1.0, 4.0},
                              preset::TwoBumps{{1.0, 1.0, {1.0, 0.0, 0.0}}, {0.5, 2.0, {-1.0, 0.0, 0.0}}},
                              preset::AnisotropicGaussian{1.0, {1.0, 2.0, 3.0}, {}}, preset::RandomBumps{9, 4}};
    for (const Preset& p : presets) CHECK(preset_to_json(preset_from_json(preset_to_json(p))) == preset_to_json(p));
    CHECK_THROWS_AS(preset_from_json(json{{"type", "square"}}), ConfigError);
  }

  TEST_CASE("TOML and JSON files load to the same configuration") {
    const auto dir = std::filesystem::temp_directory_path() / "landau_config_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "a.toml") << R"(experiment = "rates"
output_dir = "out/a"
fit_window = [10.0, 100.0]

[solver]
n = 48
T = 100.0
p_list = [2.0, 3.0]
initial = { type = "spike", mass = 1.0, width_cells = 3.0 }
)";
    std::ofstream(dir / "a.json") << R"({"experiment": "rates", "output_dir": "out/a", "fit_window": [10.0, 100.0],
      "solver": {"n": 48, "T": 100.0, "p_list": [2.0, 3.0],
                 "initial": {"type": "spike", "mass": 1.0, "width_cells": 3.0}}})";
    std::ofstream(dir / "a.cfg") << "experiment = \"rates\"\n";
    const ExperimentConfig t = load_config(dir / "a.toml");
    const ExperimentConfig j = load_config(dir / "a.json");
    CHECK(config_to_json(t) == config_to_json(j));
    CHECK(t.solver.n == 48);
    CHECK(load_config(dir / "a.cfg").experiment == Experiment::rates);
    CHECK_THROWS_AS(load_config(dir / "missing.toml"), ConfigError);
    std::filesystem::remove_all(dir);
  }
}

TEST_SUITE("config") {
  TEST_CASE("shipped example configurations load") {
    const std::filesystem::path dir = std::filesystem::path(LANDAU_SOURCE_DIR) / "configs";
    CHECK(load_config(dir / "rates.toml").experiment == Experiment::rates);
    CHECK(load_config(dir / "quick_lp_decay.toml").solver.n == 32);
    const ExperimentConfig dg = load_config(dir / "degiorgi.json");
    CHECK(dg.degiorgi.grids == std::vector<int>{64, 96});
    CHECK(dg.solver.T == dg.degiorgi.t);
  }
}
