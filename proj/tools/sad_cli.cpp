#include <CLI11.hpp>
#include <iostream>

#include "sad/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sad: streaming anomaly detection runner"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand(
      "run", "replay a stream through a configured pipeline");
  std::string config_path;
  run_cmd->add_option("-c,--config", config_path, "run configuration (JSON)")
      ->required();
  sad::CliOverrides overrides;
  std::string input_path, scores_path, report_path;
  std::uint64_t seed = 0;
  auto* input_opt = run_cmd->add_option(
      "--input", input_path, "override the csv input path");
  auto* scores_opt = run_cmd->add_option(
      "--scores", scores_path, "override the scores output path");
  auto* report_opt = run_cmd->add_option(
      "--report", report_path, "override the report output path");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "override the run seed");

  CLI11_PARSE(app, argc, argv);

  try {
    sad::RunConfig config = sad::load_config(config_path);
    if (*input_opt) overrides.csv_path = input_path;
    if (*scores_opt) overrides.scores_path = scores_path;
    if (*report_opt) overrides.report_path = report_path;
    if (*seed_opt) overrides.seed = seed;
    sad::apply_overrides(config, overrides);
    sad::run(config, std::cout);
    return 0;
  } catch (const sad::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sad::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
