// Command-line front end.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "srgeo/cli/commands.hpp"

int main(int argc, char** argv) {
  namespace cli = srgeo::cli;
  CLI::App app{"Sub-Riemannian geodesics on the unit tangent bundle and their fronts"};
  std::string command;
  std::string config, out_dir = ".";
  std::size_t count = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  app.add_option("command", command, "simulate | classify | sweep | oracle | render | check")
      ->required()
      ->check(CLI::IsMember({"simulate", "classify", "sweep", "oracle", "render", "check"}));
  auto* config_opt = app.add_option("--config", config, "JSON run configuration");
  app.add_option("--out", out_dir, "Output directory");
  auto* count_opt = app.add_option("--count", count, "Sweep sample count");
  auto* seed_opt = app.add_option("--seed", seed, "Sampling seed");
  auto* tol_opt = app.add_option("--tol", tol, "Integrator tolerance");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitConfig;
  }
  cli::CommandOptions opts;
  if (*config_opt) opts.config = config;
  opts.out_dir = out_dir;
  if (*count_opt) opts.count = count;
  if (*seed_opt) opts.seed = seed;
  if (*tol_opt) opts.tol = tol;
  return cli::run_command(command, opts, std::cout, std::cerr);
}
