// g2lab command line: run named experiments from JSON configs and/or flags.
//
//   g2lab run <experiment> [--config FILE] [--seed N] [--trials N]
//             [--out PATH] [--format json|csv] [--raw-clicks]
//             [--source NAME] [--scenario NAME] [--models N]
//             [--trials-per-setting N] [--no-timestamp]
//   g2lab list
//
// Exit codes: 0 success, 2 config error, 3 numerical failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Flags {
  std::string experiment;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> models;
  std::optional<std::uint64_t> trials_per_setting;
  std::string out_path;
  std::string format;
  std::string source;
  std::string scenario;
  bool raw_clicks = false;
  bool no_timestamp = false;
};

// Flags become an overlay document; file fields they name are overridden.
g2lab::experiments::ExperimentConfig resolve(const Flags& flags) {
  nlohmann::json overlay = nlohmann::json::object();
  overlay["experiment"] = flags.experiment;
  if (flags.seed) overlay["seed"] = *flags.seed;
  if (flags.trials) overlay["trials"] = *flags.trials;
  if (flags.models) overlay["models"] = *flags.models;
  if (flags.trials_per_setting)
    overlay["trials_per_setting"] = *flags.trials_per_setting;
  if (!flags.scenario.empty()) overlay["scenario"] = flags.scenario;
  if (!flags.source.empty()) overlay["source"] = {{"type", flags.source}};
  if (!flags.out_path.empty()) overlay["output"]["path"] = flags.out_path;
  if (!flags.format.empty()) overlay["output"]["format"] = flags.format;
  if (flags.raw_clicks) overlay["output"]["raw_clicks"] = true;
  if (flags.no_timestamp) overlay["output"]["timestamp"] = false;

  return g2lab::experiments::resolve_config(overlay, flags.config_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classical vs quantum photodetection laboratory"};
  app.require_subcommand(1);

  Flags flags;
  auto* run_cmd = app.add_subcommand("run", "run a named experiment");
  run_cmd->add_option("experiment", flags.experiment, "experiment name")
      ->required();
  run_cmd->add_option("--config", flags.config_path, "JSON config file");
  run_cmd->add_option("--seed", flags.seed, "master seed (required for "
                                            "stochastic experiments)");
  run_cmd->add_option("--trials", flags.trials, "number of trials");
  run_cmd->add_option("--models", flags.models, "random mixture models (lhv)");
  run_cmd->add_option("--trials-per-setting", flags.trials_per_setting,
                      "trials per setting (chsh-counts)");
  run_cmd->add_option("--out", flags.out_path, "output path (default stdout)");
  run_cmd->add_option("--format", flags.format, "json or csv");
  run_cmd->add_option("--source", flags.source,
                      "source preset: single-photon, state, singlet, "
                      "deterministic, thermal, anticorrelated, custom");
  run_cmd->add_option("--scenario", flags.scenario,
                      "scenario preset (chsh-operator, chsh-counts)");
  run_cmd->add_flag("--raw-clicks", flags.raw_clicks,
                    "also write the per-trial click CSV");
  run_cmd->add_flag("--no-timestamp", flags.no_timestamp,
                    "omit generated_at from the output");

  auto* list_cmd = app.add_subcommand("list", "list the experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (list_cmd->parsed()) {
      std::cout << g2lab::experiments::list_experiments();
      return kExitOk;
    }
    g2lab::experiments::run(resolve(flags));
    return kExitOk;
  } catch (const g2lab::Error& e) {
    std::cerr << "g2lab: error: " << e.what() << '\n';
    return e.is_config_error() ? kExitConfig : kExitNumeric;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "g2lab: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "g2lab: failure: " << e.what() << '\n';
    return kExitNumeric;
  }
}
