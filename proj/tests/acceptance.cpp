// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Lines starting with INFO are diagnostics only.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "drygame/config_json.hpp"
#include "drygame/csv.hpp"
#include "drygame/errors.hpp"
#include "drygame/game.hpp"
#include "drygame/oracle.hpp"
#include "drygame/solver.hpp"
#include "testing/instances.hpp"
#include "testing/reference_dp.hpp"

namespace fs = std::filesystem;
using namespace drygame;

namespace {

// Tolerances and runtime limits.
constexpr double kExactTol = 1e-12;
constexpr double kSecurityTol = 1e-9;
constexpr double kSaddleEps = 1e-9;
constexpr double kReductionTol = 1e-12;
constexpr double kScalingRelTol = 1e-9;
constexpr double kOracleLimitSec = 1.0;
constexpr double kConvergenceLimitSec = 30.0;
constexpr double kSaddleLimitSec = 5.0;

// Depth at which the exhaustive tree for the thin-layer instance stays under
// the oracle node budget: (5 * 5)^4 summed over depths is 406900 nodes.
constexpr int kProxyDepth = 4;
constexpr int kGridLevels = 3;

struct Result {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

std::string num(double v) { return csv::number(v); }

fs::path g_work;

fs::path write_config(const GameConfig& cfg, const std::string& name) {
  const fs::path p = g_work / name;
  std::ofstream(p, std::ios::binary) << config_to_json(cfg).dump(2) << '\n';
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DRYGAME_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool bit_equal(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].size() != b[k].size()) return false;
    for (std::size_t j = 0; j < a[k].size(); ++j)
      if (std::memcmp(&a[k][j], &b[k][j], sizeof(double)) != 0) return false;
  }
  return true;
}

bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] <= v[i - 1])) return false;  // NaN fails
  return true;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s;
}

GameConfig with_grid_level(GameConfig cfg, int level) {
  cfg.state_grid.points = (cfg.state_grid.points - 1) * (1 << level) + 1;
  return cfg;
}

// ---------------------------------------------------------------------------

Result oracle_exact() {
  Result r;
  const auto cfg = testing::grid_aligned();
  const auto sol = solve_energy(cfg);
  const auto o = brute_force_value(cfg);
  r.detail << "dp=" << num(sol.value()) << " oracle=" << num(o.value)
           << " dp_t=" << num(sol.root.temperature) << " oracle_t=" << num(o.first_control);
  r.require(is_grid_aligned(cfg, sol.grids), "instance is grid-aligned");
  r.require(std::abs(sol.value() - o.value) <= kExactTol, "|dp - oracle| <= 1e-12");
  r.require(sol.root.temperature == o.first_control, "first controls coincide");
  return r;
}

// Gap to the depth-capped exhaustive tree and successive refinement gaps at
// full depth, over three state-grid levels.
Result oracle_convergence(const GameConfig& base) {
  Result r;
  GameConfig proxy = base;
  proxy.horizon = base.step_length() * kProxyDepth;
  proxy.steps = kProxyDepth;

  const double oracle = brute_force_value(proxy).value;
  std::vector<double> proxy_gaps, values;
  for (int level = 0; level < kGridLevels; ++level) {
    const double dp_proxy = solve_energy_unchecked(with_grid_level(proxy, level)).value();
    proxy_gaps.push_back(std::abs(dp_proxy - oracle));
    values.push_back(solve_energy_unchecked(with_grid_level(base, level)).value());
  }
  std::vector<double> refine_gaps;
  for (std::size_t i = 1; i < values.size(); ++i) refine_gaps.push_back(std::abs(values[i] - values[i - 1]));

  r.detail << "oracle(depth " << kProxyDepth << ")=" << num(oracle) << " proxy_gaps=" << join(proxy_gaps)
           << " V=" << join(values) << " refine_gaps=" << join(refine_gaps);
  r.require(std::isfinite(oracle), "terminal set reachable against every disturbance");
  r.require(nonincreasing(proxy_gaps), "proxy gaps non-increasing");
  r.require(nonincreasing(refine_gaps), "refinement gaps non-increasing");
  return r;
}

Result security() {
  Result r;
  const auto cfg = testing::grid_aligned();
  const auto sol = solve_energy(cfg);
  const auto grids = build_grids(cfg);
  const std::uint64_t count = schedule_count(grids);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::uint64_t code = 0; code < count; ++code) {
    const double p = simulate(cfg, sol.policy, ScheduleNature{schedule_from_code(grids, code)}).payoff();
    worst = std::max(worst, p);
  }
  const double attained =
      simulate(cfg, sol.policy, ResponderNature{std::make_shared<const NatureResponder>(sol.responder)}).payoff();
  r.detail << "schedules=" << count << " F=" << num(sol.value()) << " worst=" << num(worst)
           << " responder=" << num(attained);
  r.require(count == 27, "27 schedules");
  r.require(worst <= sol.value() + kSecurityTol, "every payoff <= F + 1e-9");
  r.require(std::abs(attained - sol.value()) <= kSecurityTol, "responder attains F");
  return r;
}

Result saddle() {
  Result r;
  const auto cfg = testing::grid_aligned();
  const auto sol = solve_energy(cfg);
  const std::size_t budget = 1000000;
  const auto rep = verify_saddle(cfg, sol.policy, sol.responder, kSaddleEps, budget, budget);
  const auto mut = verify_saddle(cfg, testing::worst_policy(cfg, sol), sol.responder, kSaddleEps, budget, budget);
  r.detail << "left_tested=" << rep.left_tested << " left_max=" << num(rep.left_max_violation)
           << " right_tested=" << rep.right_tested << "/" << rep.operator_family_size
           << " right_max=" << num(rep.right_max_violation)
           << " mutation_right_max=" << num(mut.right_max_violation);
  r.require(rep.left_exhaustive, "exhaustive nature deviations");
  r.require(rep.right_tested == rep.operator_family_size, "full operator family");
  r.require(rep.pass, "saddle passes at 1e-9");
  r.require(mut.right_max_violation > kSaddleEps, "mutation fails the right-hand check");
  return r;
}

bool same_trajectory(const Trajectory& a, const Trajectory& b) {
  return a.x == b.x && a.control == b.control && a.stage_energy == b.stage_energy &&
         a.cum_energy == b.cum_energy && a.terminal_step == b.terminal_step;
}

Result reductions() {
  Result r;
  double worst_gap = 0.0;
  for (const double alpha : {0.0, 0.1, 0.2}) {
    const auto cfg = testing::singleton_nature(alpha);
    const auto sol = solve_energy_unchecked(cfg);
    const auto ref = testing::plain_min_dp(cfg);
    for (std::size_t k = 0; k < ref.values.size(); ++k)
      for (std::size_t j = 0; j < ref.values[k].size(); ++j) {
        const double a = sol.values.slices[k][j], b = ref.values[k][j];
        if (std::isinf(a) || std::isinf(b)) {
          if (a != b) worst_gap = std::numeric_limits<double>::infinity();
        } else {
          worst_gap = std::max(worst_gap, std::abs(a - b));
        }
      }
    if (std::isfinite(ref.root) || std::isfinite(sol.value()))
      worst_gap = std::max(worst_gap, std::abs(sol.value() - ref.root));
  }
  r.detail << "singleton_max_gap=" << num(worst_gap);
  r.require(worst_gap <= kReductionTol, "singleton nature matches plain-min DP");

  const auto cfg = testing::alpha_independent();
  const auto sol = solve_energy(cfg);
  const auto base =
      simulate(cfg, sol.policy, ResponderNature{std::make_shared<const NatureResponder>(sol.responder)});
  bool identical = same_trajectory(base, simulate(cfg, sol.policy, ConstantNature{0.1}));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 0.2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> alphas(static_cast<std::size_t>(cfg.steps));
    for (auto& a : alphas) a = u(rng);
    identical = identical && same_trajectory(base, simulate(cfg, sol.policy, ScheduleNature{alphas}));
  }
  r.detail << " alpha_independent_payoff=" << num(base.payoff());
  r.require(identical, "responder, constant and random schedules give identical trajectories");
  return r;
}

Result time_objective() {
  Result r;
  const auto cfg = testing::constant_rate();
  const int steps = solve_time(cfg).root_steps;
  auto start = cfg;
  start.x0 = 0.1;
  const int zero = solve_time(start).root_steps;
  auto frozen = cfg;
  frozen.dynamics = AffineDynamics{};
  const int exit_code = run_cli("solve --config " + write_config(frozen, "frozen.json").string() + " --out " +
                                (g_work / "frozen").string());
  r.detail << "N=" << steps << " N(x0 in target)=" << zero << " frozen_exit=" << exit_code;
  r.require(steps == 4, "constant rate gives 4");
  r.require(zero == 0, "start in target gives 0");
  r.require(exit_code == 2, "frozen dynamics exits 2");
  return r;
}

GameConfig scale_energy(GameConfig cfg, double lambda) {
  cfg.energy.c0 *= lambda;
  cfg.energy.c1 *= lambda;
  return cfg;
}

std::vector<double> sweep_values(const GameConfig& cfg, const std::string& name) {
  const fs::path out = g_work / name;
  if (run_cli("sweep --config " + write_config(cfg, name + ".json").string() +
              " --x0 0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1 --out " + out.string()) != 0)
    return {};
  std::vector<double> v;
  for (const auto& row : csv::read(out / "sweep.csv").rows) v.push_back(csv::parse_number(row[1]));
  return v;
}

Result invariance() {
  Result r;
  double worst_rel = 0.0;
  bool policies_equal = true, inf_pattern = true;
  for (const auto& cfg : {testing::grid_aligned(), testing::lewis_feasible()}) {
    const auto base = solve_energy(cfg);
    for (const double lambda : {0.5, 3.0}) {
      const auto scaled = solve_energy(scale_energy(cfg, lambda));
      for (std::size_t k = 0; k < base.values.slices.size(); ++k)
        for (std::size_t j = 0; j < base.values.slices[k].size(); ++j) {
          const double a = base.values.slices[k][j], b = scaled.values.slices[k][j];
          if (std::isinf(a) || std::isinf(b)) {
            inf_pattern = inf_pattern && a == b;
          } else if (a != 0.0) {
            worst_rel = std::max(worst_rel, std::abs(b - lambda * a) / std::abs(lambda * a));
          } else {
            inf_pattern = inf_pattern && b == 0.0;
          }
        }
      policies_equal = policies_equal && scaled.policy.control == base.policy.control;
    }
  }
  const auto bench = sweep_values(testing::lewis_benchmark(), "sweep_benchmark");
  const auto feasible = sweep_values(testing::lewis_feasible(), "sweep_feasible");
  const auto nondecreasing = [](const std::vector<double>& v) {
    if (v.size() != 11) return false;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] >= v[i - 1])) return false;
    return true;
  };
  r.detail << "max_rel=" << num(worst_rel) << " sweep_benchmark=" << join(bench)
           << " sweep_wide_target=" << join(feasible);
  r.require(worst_rel <= kScalingRelTol, "values scale by lambda");
  r.require(inf_pattern, "infeasible and terminal nodes unchanged");
  r.require(policies_equal, "policies bit-identical");
  r.require(nondecreasing(bench), "benchmark sweep nondecreasing");
  r.require(nondecreasing(feasible), "wide-target sweep nondecreasing");
  return r;
}

Result determinism() {
  Result r;
  const auto cfg = write_config(testing::lewis_feasible(), "det.json");
  std::vector<std::string> files;
  bool runs_ok = true;
  for (const char* run : {"run_a", "run_b"}) {
    const fs::path d = g_work / run;
    runs_ok = runs_ok && run_cli("solve --config " + cfg.string() + " --out " + (d / "solve").string()) == 0;
    runs_ok = runs_ok && run_cli("simulate --config " + cfg.string() + " --policy " +
                                 (d / "solve" / "policy.csv").string() + " --out " + (d / "sim").string()) == 0;
    runs_ok = runs_ok && run_cli("--threads 4 refine --config " + cfg.string() + " --levels 3 --out " +
                                 (d / "refine").string()) == 0;
  }
  std::size_t compared = 0;
  bool bytes_equal = true;
  for (const auto& entry : fs::recursive_directory_iterator(g_work / "run_a")) {
    if (entry.path().extension() != ".csv") continue;
    const fs::path other = g_work / "run_b" / fs::relative(entry.path(), g_work / "run_a");
    bytes_equal = bytes_equal && fs::exists(other) && slurp(entry.path()) == slurp(other);
    ++compared;
  }

  GameConfig big = testing::lewis_feasible();
  big.state_grid.points = 401;
  const auto serial = solve_energy(big, {1});
  const auto parallel = solve_energy(big, {8});
  const bool tables_equal = bit_equal(serial.values.slices, parallel.values.slices) &&
                            serial.policy.control == parallel.policy.control &&
                            serial.responder.disturbance == parallel.responder.disturbance;
  r.detail << "csv_files_compared=" << compared;
  r.require(runs_ok, "all CLI runs exit 0");
  r.require(compared == 5, "five CSV artifacts per run");
  r.require(bytes_equal, "CSV artifacts byte-identical");
  r.require(tables_equal, "serial and parallel tables bit-identical");
  return r;
}

int g_failures = 0;

void report(int id, const std::string& name, double limit_sec, const std::function<Result()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Result r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail << " [exception: " << e.what() << "]";
  }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_sec > 0.0 && sec > limit_sec) {
    r.pass = false;
    r.detail << " [violated: runtime limit " << limit_sec << " s]";
  }
  if (!r.pass) ++g_failures;
  std::printf("%s [%d] %s (%.3f s): %s\n", r.pass ? "PASS" : "FAIL", id, name.c_str(), sec,
              r.detail.str().c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  g_work = fs::temp_directory_path() / ("drygame_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  report(1, "oracle equivalence, grid-aligned", kOracleLimitSec, oracle_exact);
  report(2, "oracle convergence, thin-layer benchmark", kConvergenceLimitSec,
         [] { return oracle_convergence(testing::lewis_benchmark()); });
  report(3, "security over all disturbance schedules", 0.0, security);
  report(4, "saddle verification and mutation", kSaddleLimitSec, saddle);
  report(5, "reductions", 0.0, reductions);
  report(6, "time objective", 0.0, time_objective);
  report(7, "invariance", 0.0, invariance);
  report(8, "determinism and I/O", 0.0, determinism);

  {
    // Same convergence procedure on the benchmark with a wider target set.
    const auto r = oracle_convergence(testing::lewis_feasible());
    std::printf("INFO convergence with target [0, 0.45]: %s: %s\n", r.pass ? "holds" : "does not hold",
                r.detail.str().c_str());
  }

  fs::remove_all(g_work);
  std::printf("%d of 8 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
