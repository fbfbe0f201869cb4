#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "landau/config.hpp"
#include "landau/harness.hpp"
#include "landau/toml_lite.hpp"

namespace {

using landau::Experiment;

struct Options {
  std::string config_file;
  std::string out;
};

// Defaults for `e`, optionally overridden by a config file whose experiment
// must agree with the subcommand.
landau::ExperimentConfig resolve(Experiment e, const Options& opt) {
  landau::ExperimentConfig c = landau::default_config(e);
  if (!opt.config_file.empty()) {
    c = landau::load_config(opt.config_file);
    if (c.experiment != e)
      throw landau::ConfigError("config experiment '" + landau::to_string(c.experiment) + "' does not match '" +
                                landau::to_string(e) + "'");
  }
  if (!opt.out.empty()) c.output_dir = opt.out;
  return c;
}

int execute(const landau::ExperimentConfig& c) {
  std::cout << "experiment " << landau::to_string(c.experiment) << " -> " << c.output_dir.string() << '\n';
  const landau::SummaryReport report = landau::run_experiment(c);
  for (const auto& item : report.items())
    if (item.status != landau::ItemStatus::not_evaluated) std::cout << landau::headline(item) << '\n';
  std::cout << (report.all_pass() ? "all evaluated items passed" : "some items failed or none were evaluated")
            << '\n';
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landau-Coulomb diffusion simulator and verification harness"};
  app.require_subcommand(1);

  Options run_opt;
  auto* run = app.add_subcommand("run", "Run the experiment described by a TOML or JSON file");
  run->add_option("config", run_opt.config_file, "Experiment file (.toml or .json)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_opt.out, "Output directory (overrides the file)");

  struct Named {
    const char* command;
    const char* help;
    Experiment experiment;
    Options opt;
  };
  Named named[] = {
      {"validate-kernel", "Kernel oracle agreement and structural identities", Experiment::kernel_validate, {}},
      {"inequalities", "Homogeneity, interpolation and Poincare checks", Experiment::inequalities, {}},
      {"degiorgi", "Level-set energies and recursion constants", Experiment::degiorgi, {}},
      {"rates", "Spike run: L^p and L^inf decay, moments", Experiment::rates, {}},
      {"compare-heat", "Paired Landau and heat runs", Experiment::heat_comparison, {}},
  };
  std::vector<CLI::App*> subs;
  for (auto& n : named) {
    auto* sub = app.add_subcommand(n.command, n.help);
    sub->add_option("--config", n.opt.config_file, "Override the defaults with a TOML or JSON file")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", n.opt.out, "Output directory");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      landau::ExperimentConfig c = landau::load_config(run_opt.config_file);
      if (!run_opt.out.empty()) c.output_dir = run_opt.out;
      return execute(c);
    }
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (*subs[i]) return execute(resolve(named[i].experiment, named[i].opt));
  } catch (const landau::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const landau::TomlError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const landau::SolverAbort& e) {
    std::cerr << "solver aborted: " << e.what() << '\n';
    if (e.dump()) std::cerr << "state dumped to " << e.dump()->string() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
