#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Information rate of ligand-receptor molecular receivers"};
  app.require_subcommand(1);

  molcap::cli::CommandOptions options;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string format;
  int threads = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"capacity", "optimize the i.i.d. rate and certify the optimum"},
      {"sweep", "capacity over a grid of receptor parameters"},
      {"simulate", "simulate the channel and compare the empirical rate with theory"},
      {"diffusion", "impulse coefficients, concentration trace and inversion"},
      {"reduce", "shrink a distribution's support while keeping chosen expectations"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", options.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides output.path)");
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_option("--format", format, "primary result format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : molcap::cli::kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--out")) options.out = out_dir;
  if (sub->count("--seed")) options.seed = seed;
  if (sub->count("--format")) options.format = format;
  if (sub->count("--threads")) options.threads = threads;
  return molcap::cli::run_command(sub->get_name(), options, std::cout, std::cerr);
}
