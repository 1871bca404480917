#include "drygame/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "drygame/config_json.hpp"
#include "drygame/csv.hpp"
#include "drygame/errors.hpp"
#include "drygame/oracle.hpp"

namespace drygame::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

// Loads and validates; prints every violation and returns nullopt on failure.
std::optional<LoadedConfig> load_valid(const fs::path& path, Streams io) {
  LoadedConfig loaded;
  try {
    loaded = load_config(path);
  } catch (const ConfigError& e) {
    io.err << "error: " << e.what() << '\n';
    return std::nullopt;
  }
  const auto rep = validate_config(loaded.config);
  for (const auto& w : rep.warnings) io.err << "warning: " << w << '\n';
  if (!rep.ok()) {
    io.err << "error: invalid configuration " << path.string() << '\n';
    for (const auto& v : rep.violations) io.err << "  " << v << '\n';
    return std::nullopt;
  }
  return loaded;
}

bool make_dir(const fs::path& dir, Streams io) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    io.err << "error: cannot create " << dir.string() << ": " << ec.message() << '\n';
    return false;
  }
  return true;
}

void write_manifest(const fs::path& dir, const LoadedConfig& cfg, const std::string& command,
                    const std::vector<std::string>& artifacts, Clock::time_point start) {
  json m;
  m["config_digest"] = content_digest(cfg.bytes);
  m["command"] = command;
  m["artifacts"] = artifacts;
  m["solver_version"] = kSolverVersion;
  m["objective"] = to_string(cfg.config.objective);
  m["wall_clock_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  out << m.dump(2) << '\n';
}

double steps_as_number(int steps) {
  return steps == kUnreachable ? std::numeric_limits<double>::infinity() : steps;
}

void write_policy(const fs::path& path, const OperatorPolicy& policy) {
  csv::Writer w(path, {"i", "x", "t"});
  const auto& g = policy.grids;
  for (int i = 1; i <= g.steps(); ++i)
    for (std::size_t j = 0; j < g.state.size(); ++j) {
      w.cell(i).cell(g.state[j]).cell(policy.temperature(i, j));
      w.end_row();
    }
}

int find_exact(std::span<const double> grid, double v) {
  for (std::size_t c = 0; c < grid.size(); ++c)
    if (grid[c] == v) return static_cast<int>(c);
  return kNoControl;
}

// Row-major layout check shared by both artifact readers: (i, node) pairs in order.
void expect_row(const Grids& grids, const csv::Table& t, std::size_t row, int i, std::size_t node) {
  const auto& r = t.rows[row];
  if (std::stoi(r[t.column("i")]) != i ||
      csv::parse_number(r[t.column("x")]) != grids.state[node])
    throw StrategyMismatch("row " + std::to_string(row + 2) + " does not match the state grid");
}

std::string digest_of_manifest(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json", std::ios::binary);
  if (!in) throw StrategyMismatch("no manifest.json next to the policy file");
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception&) {
    throw StrategyMismatch("manifest.json next to the policy file is not valid JSON");
  }
  if (!m.contains("config_digest") || !m["config_digest"].is_string())
    throw StrategyMismatch("manifest.json has no config digest");
  return m["config_digest"].get<std::string>();
}

}  // namespace

NatureSpec parse_nature_spec(const std::string& spec) {
  if (spec == "responder") return {NatureSpec::Responder{}};
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("unknown nature spec '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "constant") {
    const auto vals = parse_number_list(rest);
    if (vals.size() != 1) throw std::invalid_argument("constant:<float> takes one value");
    return {ConstantNature{vals[0]}};
  }
  if (kind == "schedule") return {ScheduleNature{parse_number_list(rest)}};
  throw std::invalid_argument("unknown nature spec '" + spec + "'");
}

std::vector<double> parse_number_list(const std::string& list) {
  std::vector<double> out;
  if (list.empty()) return out;
  std::istringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    double v = 0.0;
    try {
      v = csv::parse_number(item);
    } catch (const std::runtime_error&) {
      throw std::invalid_argument("not a number: '" + item + "'");
    }
    if (!std::isfinite(v)) throw std::invalid_argument("not a finite number: '" + item + "'");
    out.push_back(v);
  }
  if (list.back() == ',') throw std::invalid_argument("trailing comma in '" + list + "'");
  return out;
}

OperatorPolicy read_policy(const fs::path& path, const Grids& grids) {
  csv::Table t;
  try {
    t = csv::read(path);
    OperatorPolicy p;
    p.grids = grids;
    const std::size_t nodes = grids.state.size();
    if (t.rows.size() != static_cast<std::size_t>(grids.steps()) * nodes)
      throw StrategyMismatch("policy has " + std::to_string(t.rows.size()) + " rows, expected " +
                             std::to_string(grids.steps() * nodes));
    p.control.assign(static_cast<std::size_t>(grids.steps()), std::vector<int>(nodes));
    std::size_t row = 0;
    for (int i = 1; i <= grids.steps(); ++i)
      for (std::size_t j = 0; j < nodes; ++j, ++row) {
        expect_row(grids, t, row, i, j);
        const double temp = csv::parse_number(t.rows[row][t.column("t")]);
        int c = kNoControl;
        if (!std::isnan(temp)) {
          c = find_exact(grids.control_grid(i), temp);
          if (c == kNoControl)
            throw StrategyMismatch("policy temperature " + csv::number(temp) +
                                   " is not on the control grid of step " + std::to_string(i));
        }
        p.control[static_cast<std::size_t>(i - 1)][j] = c;
      }
    return p;
  } catch (const StrategyMismatch&) {
    throw;
  } catch (const std::exception& e) {
    throw StrategyMismatch(path.string() + ": " + e.what());
  }
}

NatureResponder read_responder(const fs::path& path, const Grids& grids) {
  try {
    const csv::Table t = csv::read(path);
    NatureResponder r;
    r.grids = grids;
    std::size_t expected = 0;
    for (const auto& ts : grids.controls) expected += ts.size() * grids.state.size();
    if (t.rows.size() != expected)
      throw StrategyMismatch("responder has " + std::to_string(t.rows.size()) +
                             " rows, expected " + std::to_string(expected));
    r.disturbance.resize(static_cast<std::size_t>(grids.steps()));
    std::size_t row = 0;
    for (int i = 1; i <= grids.steps(); ++i) {
      const auto ts = grids.control_grid(i);
      auto& slice = r.disturbance[static_cast<std::size_t>(i - 1)];
      slice.assign(grids.state.size(), std::vector<int>(ts.size()));
      for (std::size_t j = 0; j < grids.state.size(); ++j)
        for (std::size_t c = 0; c < ts.size(); ++c, ++row) {
          expect_row(grids, t, row, i, j);
          const auto& cells = t.rows[row];
          if (csv::parse_number(cells[t.column("t")]) != ts[c])
            throw StrategyMismatch("responder row " + std::to_string(row + 2) +
                                   " does not match the control grid");
          const int d = find_exact(grids.disturbance_grid(i),
                                   csv::parse_number(cells[t.column("alpha")]));
          if (d == kNoControl)
            throw StrategyMismatch("responder row " + std::to_string(row + 2) +
                                   " is off the disturbance grid");
          slice[j][c] = d;
        }
    }
    return r;
  } catch (const StrategyMismatch&) {
    throw;
  } catch (const std::exception& e) {
    throw StrategyMismatch(path.string() + ": " + e.what());
  }
}

int cmd_solve(const fs::path& config, const fs::path& out_dir, Streams io, const SolveOptions& opts) {
  const auto start = Clock::now();
  const auto loaded = load_valid(config, io);
  if (!loaded) return kUserError;
  const GameConfig& cfg = loaded->config;
  if (!make_dir(out_dir, io)) return kUserError;

  try {
    if (cfg.objective == Objective::kEnergy) {
      const auto sol = solve_energy(cfg, opts);
      const auto& g = sol.grids;
      {
        csv::Writer w(out_dir / "value.csv", {"k", "x", "value"});
        for (int k = 0; k <= cfg.steps; ++k)
          for (std::size_t j = 0; j < g.state.size(); ++j) {
            w.cell(k).cell(g.state[j]).cell(sol.values.slices[k][j]);
            w.end_row();
          }
      }
      write_policy(out_dir / "policy.csv", sol.policy);
      {
        csv::Writer w(out_dir / "responder.csv", {"i", "x", "t", "alpha"});
        for (int i = 1; i <= cfg.steps; ++i) {
          const auto ts = g.control_grid(i);
          for (std::size_t j = 0; j < g.state.size(); ++j)
            for (std::size_t c = 0; c < ts.size(); ++c) {
              w.cell(i).cell(g.state[j]).cell(ts[c]).cell(
                  sol.responder.alpha(i, j, static_cast<int>(c)));
              w.end_row();
            }
        }
      }
      write_manifest(out_dir, *loaded, "solve",
                     {"value.csv", "policy.csv", "responder.csv", "manifest.json"}, start);
      io.out << "value=" << csv::number(sol.value())
             << " first_control=" << csv::number(sol.root.temperature) << '\n';
    } else {
      const auto sol = solve_time(cfg, opts);
      const auto& g = sol.grids;
      {
        csv::Writer w(out_dir / "value.csv", {"k", "x", "value"});
        for (int k = 0; k <= cfg.steps; ++k)
          for (std::size_t j = 0; j < g.state.size(); ++j) {
            w.cell(k).cell(g.state[j]).cell(steps_as_number(sol.slices[k][j]));
            w.end_row();
          }
      }
      write_policy(out_dir / "policy.csv", sol.policy);
      write_manifest(out_dir, *loaded, "solve", {"value.csv", "policy.csv", "manifest.json"}, start);
      const double first =
          sol.root_control == kNoControl ? NAN : g.control_grid(1)[sol.root_control];
      io.out << "steps=" << sol.root_steps << " first_control=" << csv::number(first) << '\n';
    }
  } catch (const NotReachable& e) {
    io.err << "not reachable: " << e.what() << '\n';
    return kNotReachable;
  }
  return kOk;
}

int cmd_simulate(const fs::path& config, const fs::path& policy_path, const std::string& nature,
                 const fs::path& out_dir, Streams io) {
  const auto start = Clock::now();
  const auto loaded = load_valid(config, io);
  if (!loaded) return kUserError;
  const GameConfig& cfg = loaded->config;

  NatureSpec spec;
  try {
    spec = parse_nature_spec(nature);
  } catch (const std::invalid_argument& e) {
    io.err << "error: " << e.what() << '\n';
    return kUserError;
  }
  if (const auto* s = std::get_if<ScheduleNature>(&spec.kind);
      s && s->alphas.size() != static_cast<std::size_t>(cfg.steps)) {
    io.err << "error: schedule has " << s->alphas.size() << " entries, the game has " << cfg.steps
           << " steps\n";
    return kUserError;
  }

  const Grids grids = build_grids(cfg);
  NatureStrategy strategy;
  OperatorPolicy policy;
  try {
    const fs::path dir = policy_path.parent_path();
    if (digest_of_manifest(dir) != content_digest(loaded->bytes))
      throw StrategyMismatch("policy was produced from a different config (digest mismatch)");
    policy = read_policy(policy_path, grids);
    if (std::holds_alternative<NatureSpec::Responder>(spec.kind)) {
      strategy = ResponderNature{
          std::make_shared<const NatureResponder>(read_responder(dir / "responder.csv", grids))};
    } else if (const auto* c = std::get_if<ConstantNature>(&spec.kind)) {
      strategy = *c;
    } else {
      strategy = std::get<ScheduleNature>(spec.kind);
    }
  } catch (const StrategyMismatch& e) {
    io.err << "mismatch: " << e.what() << '\n';
    return kMismatch;
  }

  if (!make_dir(out_dir, io)) return kUserError;
  Trajectory tr;
  try {
    tr = simulate(cfg, policy, strategy);
  } catch (const StrategyMismatch& e) {
    io.err << "mismatch: " << e.what() << '\n';
    return kMismatch;
  } catch (const InvalidRange& e) {
    io.err << "error: " << e.what() << '\n';
    return kUserError;
  }

  {
    csv::Writer w(out_dir / "trajectory.csv",
                  {"step", "tau", "x", "t", "alpha", "stage_energy", "cum_energy", "clamped"});
    double cum = 0.0;
    for (std::size_t i = 0; i < tr.x.size(); ++i) {
      const bool moved = i < static_cast<std::size_t>(tr.moves());
      if (moved) cum = tr.cum_energy[i];
      w.cell(i).cell(tr.tau[i]).cell(tr.x[i]);
      w.cell(moved ? tr.control[i] : NAN).cell(moved ? tr.disturbance[i] : NAN);
      w.cell(moved ? tr.stage_energy[i] : 0.0).cell(cum).cell(tr.clamped[i] ? 1 : 0);
      w.end_row();
    }
  }
  write_manifest(out_dir, *loaded, "simulate", {"trajectory.csv", "manifest.json"}, start);
  io.out << "total_energy=" << csv::number(tr.energy()) << " terminal_step="
         << (tr.terminal_step ? std::to_string(*tr.terminal_step) : std::string("none"))
         << " payoff=" << csv::number(tr.payoff()) << '\n';
  return kOk;
}

int cmd_refine(const fs::path& config, int levels, const fs::path& out_dir, Streams io,
               const SolveOptions& opts) {
  const auto start = Clock::now();
  if (levels < 2) {
    io.err << "error: refine needs --levels ≥ 2\n";
    return kUserError;
  }
  const auto loaded = load_valid(config, io);
  if (!loaded) return kUserError;
  if (!make_dir(out_dir, io)) return kUserError;
  std::vector<RefineLevel> rows;
  try {
    rows = refine_and_solve(loaded->config, levels, opts);
  } catch (const NotReachable& e) {
    io.err << "not reachable: " << e.what() << '\n';
    return kNotReachable;
  }
  csv::Writer w(out_dir / "refine.csv", {"n", "delta_t", "dx", "value", "diff_from_prev"});
  for (const auto& r : rows) {
    w.cell(r.steps).cell(r.dt).cell(r.dx).cell(r.value).cell(r.diff_from_prev);
    w.end_row();
    io.out << "n=" << r.steps << " value=" << csv::number(r.value)
           << " diff=" << csv::number(r.diff_from_prev) << '\n';
  }
  write_manifest(out_dir, *loaded, "refine", {"refine.csv", "manifest.json"}, start);
  return kOk;
}

int cmd_oracle_check(const fs::path& config, std::optional<double> tolerance, Streams io,
                     const SolveOptions& opts) {
  const auto loaded = load_valid(config, io);
  if (!loaded) return kUserError;
  const GameConfig& cfg = loaded->config;
  const OracleLimits limits;
  if (const auto nodes = oracle_node_count(cfg); nodes > limits.max_nodes) {
    io.err << "instance too large: " << nodes << " game-tree nodes exceed " << limits.max_nodes
           << '\n';
    return kTooLarge;
  }
  const Grids grids = build_grids(cfg);
  const bool aligned = is_grid_aligned(cfg, grids);

  try {
    if (cfg.objective == Objective::kTime) {
      const auto sol = solve_time(cfg, opts);
      const auto oracle = brute_force_time(cfg, limits);
      const int o = oracle ? *oracle : kUnreachable;
      io.out << "dp=" << sol.root_steps << " oracle=" << (oracle ? std::to_string(*oracle) : "inf")
             << " grid_aligned=" << (aligned ? "yes" : "no") << '\n';
      const bool ok =
          tolerance ? std::abs(steps_as_number(o) - steps_as_number(sol.root_steps)) <= *tolerance
                    : o == sol.root_steps;
      return ok ? kOk : kToleranceFailed;
    }
    const auto sol = solve_energy(cfg, opts);
    const auto oracle = brute_force_value(cfg, limits);
    const double gap = std::abs(sol.value() - oracle.value);
    const auto bound = interpolation_bound(cfg, sol);
    const double tol = tolerance ? *tolerance : aligned ? 1e-12 : bound.bound;
    const bool same_first = sol.root.temperature == oracle.first_control;
    io.out << "dp=" << csv::number(sol.value()) << " oracle=" << csv::number(oracle.value)
           << " gap=" << csv::number(gap) << " tolerance=" << csv::number(tol)
           << " grid_aligned=" << (aligned ? "yes" : "no")
           << " dp_first_control=" << csv::number(sol.root.temperature)
           << " oracle_first_control=" << csv::number(oracle.first_control)
           << " interpolation_coefficient=" << csv::number(bound.coefficient) << '\n';
    if (!(gap <= tol)) return kToleranceFailed;
    if (aligned && !tolerance && !same_first) {
      io.err << "first controls differ on a grid-aligned instance\n";
      return kToleranceFailed;
    }
    return kOk;
  } catch (const NotReachable& e) {
    io.err << "not reachable: " << e.what() << '\n';
    return kNotReachable;
  } catch (const InstanceTooLarge& e) {
    io.err << "instance too large: " << e.what() << '\n';
    return kTooLarge;
  }
}

int cmd_sweep(const fs::path& config, const std::string& x0_list, const fs::path& out_dir,
              Streams io, const SolveOptions& opts) {
  const auto start = Clock::now();
  std::vector<double> xs;
  try {
    xs = parse_number_list(x0_list);
  } catch (const std::invalid_argument& e) {
    io.err << "error: " << e.what() << '\n';
    return kUserError;
  }
  if (xs.empty()) {
    io.err << "error: --x0 needs at least one initial humidity\n";
    return kUserError;
  }
  const auto loaded = load_valid(config, io);
  if (!loaded) return kUserError;
  const GameConfig& cfg = loaded->config;
  for (double x : xs)
    if (x < cfg.state_grid.x_min || x > cfg.state_grid.x_max) {
      io.err << "error: x0 " << csv::number(x) << " outside [x_min, x_max]\n";
      return kUserError;
    }
  if (!make_dir(out_dir, io)) return kUserError;

  csv::Writer w(out_dir / "sweep.csv", {"x0", "value", "first_control"});
  if (cfg.objective == Objective::kEnergy) {
    const auto sol = solve_energy_unchecked(cfg, opts);
    for (double x : xs) {
      const auto c = energy_value_at(cfg, sol, x);
      w.cell(x).cell(c.value).cell(c.temperature);
      w.end_row();
    }
  } else {
    const auto sol = solve_time_unchecked(cfg, opts);
    for (double x : xs) {
      int c = kNoControl;
      const int steps = time_value_at(cfg, sol, x, &c);
      w.cell(x).cell(steps_as_number(steps));
      w.cell(c == kNoControl ? NAN : sol.grids.control_grid(1)[c]);
      w.end_row();
    }
  }
  write_manifest(out_dir, *loaded, "sweep", {"sweep.csv", "manifest.json"}, start);
  return kOk;
}

}  // namespace drygame::cli
