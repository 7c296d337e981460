#include <iostream>

#include <CLI11.hpp>

#include "physauth/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Physical-layer authentication simulator"};
  app.require_subcommand(1);

  std::string run_config;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  auto* run = app.add_subcommand("run", "Run a sweep and write sweep.csv, calibration.csv, summary.txt");
  run->add_option("config", run_config, "Config file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  auto* seed_opt = run->add_option("--seed", seed, "Override run.seed");
  auto* threads_opt = run->add_option("--threads", threads, "Override run.threads");

  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "Check a config file");
  validate->add_option("config", validate_config, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : physauth::kExitUsage;
  }

  if (*validate) {
    const int rc = physauth::validate_command(validate_config, std::cerr);
    if (rc == physauth::kExitOk) std::cout << validate_config << ": ok\n";
    return rc;
  }
  physauth::RunOverrides overrides;
  if (*seed_opt) overrides.seed = seed;
  if (*threads_opt) overrides.threads = threads;
  return physauth::run_command(run_config, out_dir, overrides, std::cerr, std::cerr);
}
