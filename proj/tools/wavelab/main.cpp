// wavelab <command> --config <file.json> [--out <dir>] [--seed <u64>] [--grid t=<N>,r=<N>]
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "runner.hpp"

using namespace wavelab::runner;

int main(int argc, char** argv) {
  CLI::App app{"wavelab: numerical experiments for radial semilinear wave equations"};
  std::string command, config_file, out, grid;
  std::uint64_t seed = 0;
  app.add_option("command", command, "experiment command")->required()->check(CLI::IsMember(command_ids()));
  app.add_option("--config", config_file, "JSON config file")->required();
  auto* out_opt = app.add_option("--out", out, "output root (default: wavelab-out)");
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  auto* grid_opt = app.add_option("--grid", grid, "override grid cells, t=<N>,r=<N>");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kConfigError;
  }

  ExperimentConfig cfg;
  try {
    cfg = load_config(config_file);
    if (cfg.command != command)
      throw ConfigError("command", "config is for '" + cfg.command + "', invoked as '" + command + "'");
    if (*out_opt) cfg.out = out;
    if (*seed_opt) cfg.seed = seed;
    if (*grid_opt) cfg.grid = parse_grid(grid);
  } catch (const ConfigError& e) {
    std::cerr << "config error at " << e.what() << '\n';
    return kConfigError;
  }

  RunReport rep;
  try {
    rep = run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "cannot write report: " << e.what() << '\n';
    return kAssertionFailure;
  }
  if (!rep.error.is_null()) {
    const std::string msg = rep.error.value("message", "");
    std::cerr << (rep.status == kConfigError ? "config error at " : "error: ") << msg << '\n';
  }
  for (const auto& c : rep.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : "  (" + c.detail + ")") << '\n';
  std::cout << "status " << rep.status << "  " << (cfg.out / cfg.command / rep.config_hash).string() << '\n';
  return rep.status;
}
