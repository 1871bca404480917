// Command-line front end for the drying game solver.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "drygame/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = drygame::cli;
  CLI::App app{"Guaranteed-cost drying schedules for the operator-vs-nature drying game"};
  app.require_subcommand(1);

  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads for the backward sweep")->check(CLI::PositiveNumber);

  std::string config;
  std::string out_dir;
  std::string policy;
  std::string nature = "responder";
  std::string x0_list;
  int levels = 3;
  std::optional<double> tolerance;

  auto* solve = app.add_subcommand("solve", "Solve the game for the configured objective");
  solve->add_option("--config", config, "Game config (JSON)")->required();
  solve->add_option("--out", out_dir, "Output directory")->required();

  auto* simulate = app.add_subcommand("simulate", "Play a solved policy against a nature strategy");
  simulate->add_option("--config", config, "Game config (JSON)")->required();
  simulate->add_option("--policy", policy, "policy.csv written by solve")->required();
  simulate->add_option("--nature", nature,
                       "responder | constant:<float> | schedule:<comma list>");
  simulate->add_option("--out", out_dir, "Output directory")->required();

  auto* refine = app.add_subcommand("refine", "Refine the time partition and state grid");
  refine->add_option("--config", config, "Game config (JSON)")->required();
  refine->add_option("--levels", levels, "Number of refinement levels (≥ 2)")->required();
  refine->add_option("--out", out_dir, "Output directory")->required();

  auto* oracle = app.add_subcommand("oracle-check", "Compare the solver with exhaustive game-tree search");
  oracle->add_option("--config", config, "Game config (JSON)")->required();
  oracle->add_option("--tolerance", tolerance, "Override the acceptance tolerance");

  auto* sweep = app.add_subcommand("sweep", "Guaranteed value as a function of initial humidity");
  sweep->add_option("--config", config, "Game config (JSON)")->required();
  sweep->add_option("--x0", x0_list, "Comma separated initial humidities")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kUserError;
  }

  const cli::Streams io{std::cout, std::cerr};
  const drygame::SolveOptions opts{threads};
  try {
    if (*solve) return cli::cmd_solve(config, out_dir, io, opts);
    if (*simulate) return cli::cmd_simulate(config, policy, nature, out_dir, io);
    if (*refine) return cli::cmd_refine(config, levels, out_dir, io, opts);
    if (*oracle) return cli::cmd_oracle_check(config, tolerance, io, opts);
    if (*sweep) return cli::cmd_sweep(config, x0_list, out_dir, io, opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUserError;
  }
  return cli::kUserError;
}
