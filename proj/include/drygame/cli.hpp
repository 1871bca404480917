#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "drygame/game.hpp"
#include "drygame/solver.hpp"

namespace drygame::cli {

enum ExitCode : int {
  kOk = 0,
  kUserError = 1,        // unreadable or invalid config, bad arguments
  kNotReachable = 2,     // terminal set cannot be guaranteed
  kMismatch = 3,         // artifacts were produced from another config
  kToleranceFailed = 4,  // oracle and solver disagree beyond tolerance
  kTooLarge = 5,         // oracle node budget exceeded
};

inline constexpr const char* kSolverVersion = "drygame 1.0.0";

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

struct NatureSpec {
  struct Responder {};
  std::variant<Responder, ConstantNature, ScheduleNature> kind;
};

/// `responder` | `constant:<float>` | `schedule:<comma list>`. Throws std::invalid_argument.
NatureSpec parse_nature_spec(const std::string& spec);

/// Comma separated floats. Throws std::invalid_argument on malformed entries.
std::vector<double> parse_number_list(const std::string& list);

int cmd_solve(const std::filesystem::path& config, const std::filesystem::path& out_dir,
              Streams io, const SolveOptions& opts = {});

int cmd_simulate(const std::filesystem::path& config, const std::filesystem::path& policy,
                 const std::string& nature, const std::filesystem::path& out_dir, Streams io);

int cmd_refine(const std::filesystem::path& config, int levels, const std::filesystem::path& out_dir,
               Streams io, const SolveOptions& opts = {});

/// `tolerance` overrides the automatic one (1e-12 on grid-aligned instances,
/// the interpolation bound otherwise).
int cmd_oracle_check(const std::filesystem::path& config, std::optional<double> tolerance,
                     Streams io, const SolveOptions& opts = {});

int cmd_sweep(const std::filesystem::path& config, const std::string& x0_list,
              const std::filesystem::path& out_dir, Streams io, const SolveOptions& opts = {});

/// Reads policy.csv written by cmd_solve. Throws StrategyMismatch when the rows
/// do not describe a policy on `grids`.
OperatorPolicy read_policy(const std::filesystem::path& path, const Grids& grids);

/// Reads responder.csv written by cmd_solve, same contract as read_policy.
NatureResponder read_responder(const std::filesystem::path& path, const Grids& grids);

}  // namespace drygame::cli
