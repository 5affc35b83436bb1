// Command-line runner: `otcc run|compare|validate <config.json>`.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "otcc/config.hpp"
#include "otcc/error.hpp"
#include "otcc/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void report(bool quiet, const nlohmann::ordered_json& doc) {
  if (!quiet) std::cout << doc.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal-transport and Voronoi coverage control simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  bool quiet = false;
  app.add_option("--out", out_dir, "Output directory (overrides the config)");
  app.add_flag("--quiet", quiet, "Only print errors");

  auto* run = app.add_subcommand("run", "Simulate the configured controller law");
  auto* compare = app.add_subcommand("compare", "Simulate both laws from identical starts");
  auto* validate = app.add_subcommand("validate", "Check a config and print it with defaults filled");
  for (auto* sub : {run, compare, validate}) {
    sub->add_option("config", config_path, "Experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides the config)");
    sub->add_flag("--quiet", quiet, "Only print errors");
  }

  CLI11_PARSE(app, argc, argv);

  otcc::ExperimentConfig config;
  try {
    config = otcc::load_config(config_path, out_dir);
  } catch (const otcc::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (validate->parsed()) {
      std::cout << config.to_json().dump(2) << "\n";
    } else if (run->parsed()) {
      const auto result = otcc::run_experiment(config);
      report(quiet, result.summary);
    } else {
      report(quiet, otcc::compare_experiment(config));
    }
  } catch (const otcc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == otcc::ErrorKind::kInvalidArgument ? kExitConfig : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
