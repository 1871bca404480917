#include "drygame/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "drygame/errors.hpp"

namespace drygame {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// a - b with inf - inf treated as no difference.
double excess(double a, double b) {
  if (a == b) return 0.0;
  return a - b;
}

void check_policy(const GameConfig& cfg, const OperatorPolicy& policy, const Grids& grids) {
  if (!(policy.grids == grids))
    throw StrategyMismatch("operator policy was built on a different partition or grids");
  if (policy.control.size() != static_cast<std::size_t>(grids.steps()))
    throw StrategyMismatch("operator policy has the wrong number of steps");
  for (const auto& row : policy.control)
    if (row.size() != grids.state.size())
      throw StrategyMismatch("operator policy has the wrong number of state nodes");
  (void)cfg;
}

double nature_alpha(const NatureStrategy& nature, const Grids& grids, int step, std::size_t node,
                    int control) {
  return std::visit(
      Overloaded{
          [](const ConstantNature& n) { return n.alpha; },
          [&](const ScheduleNature& n) {
            if (n.alphas.size() != static_cast<std::size_t>(grids.steps()))
              throw StrategyMismatch("disturbance schedule length " +
                                     std::to_string(n.alphas.size()) + " differs from " +
                                     std::to_string(grids.steps()) + " steps");
            return n.alphas[static_cast<std::size_t>(step - 1)];
          },
          [&](const ResponderNature& n) {
            if (!n.responder || !(n.responder->grids == grids))
              throw StrategyMismatch("nature responder was built on different grids");
            return n.responder->alpha(step, node, control);
          },
          [&](const TableNature& n) {
            const auto it = n.entries.find({step, node, control});
            return it == n.entries.end() ? grids.disturbances[step - 1].front() : it->second;
          },
      },
      nature);
}

// Shared forward loop. `choose` picks nature's disturbance given
// (step, node, control index, x); it replaces the strategy lookup when set.
template <class Choose>
Trajectory rollout(const GameConfig& cfg, const OperatorPolicy& policy, const Grids& grids,
                   Choose choose) {
  Trajectory tr;
  const double dt = grids.step_length();
  double x = cfg.x0;
  tr.tau.push_back(grids.partition.times[0]);
  tr.x.push_back(x);
  tr.clamped.push_back(false);
  double cum = 0.0;
  for (int step = 1; step <= grids.steps(); ++step) {
    if (in_terminal(cfg.terminal, x)) {
      tr.terminal_step = step - 1;
      break;
    }
    const std::size_t node = grids.state.nearest(x);
    int c = policy.index(step, node);
    if (c == kNoControl) c = 0;  // no guaranteed control exists here
    const double t = grids.controls[step - 1][static_cast<std::size_t>(c)];
    const double a = choose(step, node, c, x);
    const auto& q = cfg.ranges(step).disturbance;
    if (!(q.lo - 1e-12 <= a && a <= q.hi + 1e-12))
      throw InvalidRange("disturbance " + std::to_string(a) + " outside the range of step " +
                         std::to_string(step));

    const double stage = dt * eval_energy_rate(cfg.energy, t, a, x);
    cum += stage;
    const double raw = euler_step(cfg.dynamics, x, t, a, dt);
    const double next = grids.state.clamp(raw);
    const bool clamped = next != raw;
    tr.clamp_events += clamped ? 1 : 0;

    tr.control.push_back(t);
    tr.disturbance.push_back(a);
    tr.stage_energy.push_back(stage);
    tr.cum_energy.push_back(cum);
    tr.tau.push_back(grids.partition.times[static_cast<std::size_t>(step)]);
    tr.x.push_back(next);
    tr.clamped.push_back(clamped);
    x = next;
  }
  if (!tr.terminal_step && in_terminal(cfg.terminal, x)) tr.terminal_step = tr.moves();
  return tr;
}

Trajectory simulate_on(const GameConfig& cfg, const OperatorPolicy& policy, const Grids& grids,
                       const NatureStrategy& nature) {
  return rollout(cfg, policy, grids, [&](int step, std::size_t node, int c, double) {
    return nature_alpha(nature, grids, step, node, c);
  });
}

TableNature table_from(const Trajectory& tr, const OperatorPolicy& policy, const Grids& grids) {
  TableNature table;
  for (int m = 0; m < tr.moves(); ++m) {
    const int step = m + 1;
    const std::size_t node = grids.state.nearest(tr.x[static_cast<std::size_t>(m)]);
    int c = policy.index(step, node);
    if (c == kNoControl) c = 0;
    table.entries[{step, node, c}] = tr.disturbance[static_cast<std::size_t>(m)];
  }
  return table;
}

}  // namespace

double Trajectory::payoff() const {
  return terminal_step ? energy() : std::numeric_limits<double>::infinity();
}

Trajectory simulate(const GameConfig& cfg, const OperatorPolicy& policy,
                    const NatureStrategy& nature) {
  const Grids grids = build_grids(cfg);
  check_policy(cfg, policy, grids);
  return simulate_on(cfg, policy, grids, nature);
}

std::uint64_t schedule_count(const Grids& grids) {
  std::uint64_t total = 1;
  for (const auto& q : grids.disturbances) {
    if (total > std::numeric_limits<std::uint64_t>::max() / q.size())
      return std::numeric_limits<std::uint64_t>::max();
    total *= q.size();
  }
  return total;
}

std::vector<double> schedule_from_code(const Grids& grids, std::uint64_t code) {
  std::vector<double> out;
  out.reserve(grids.disturbances.size());
  for (const auto& q : grids.disturbances) {
    out.push_back(q[code % q.size()]);
    code /= q.size();
  }
  return out;
}

OperatorPolicy constant_policy(const Grids& grids, int control) {
  OperatorPolicy p;
  p.grids = grids;
  p.control.resize(grids.controls.size());
  for (std::size_t i = 0; i < grids.controls.size(); ++i) {
    const int c = std::min(control, static_cast<int>(grids.controls[i].size()) - 1);
    p.control[i].assign(grids.state.size(), c);
  }
  return p;
}

BestResponse best_response_nature(const GameConfig& cfg, const OperatorPolicy& policy,
                                  const ValueTable* values) {
  const Grids grids = build_grids(cfg);
  check_policy(cfg, policy, grids);
  BestResponse best;

  if (values) {
    if (values->steps() != grids.steps())
      throw StrategyMismatch("value table has the wrong number of steps");
    const double dt = grids.step_length();
    const int n = grids.steps();
    best.trajectory = rollout(cfg, policy, grids, [&](int step, std::size_t, int c, double x) {
      const auto tail = values->slice(n - step);
      const double t = grids.controls[step - 1][static_cast<std::size_t>(c)];
      const auto& qs = grids.disturbances[step - 1];
      double top = -std::numeric_limits<double>::infinity();
      double arg = qs.front();
      for (double a : qs) {
        const double v = dt * eval_energy_rate(cfg.energy, t, a, x) +
                         interp_value(tail, grids.state, clamped_image(cfg, grids, x, t, a));
        if (v > top) {
          top = v;
          arg = a;
        }
      }
      return arg;
    });
  } else {
    const std::uint64_t total = schedule_count(grids);
    if (total > kMaxEnumeratedSchedules)
      throw InstanceTooLarge(std::to_string(total) + " disturbance schedules exceed the limit of " +
                             std::to_string(kMaxEnumeratedSchedules));
    double top = -std::numeric_limits<double>::infinity();
    for (std::uint64_t code = 0; code < total; ++code) {
      auto tr = simulate_on(cfg, policy, grids, ScheduleNature{schedule_from_code(grids, code)});
      if (tr.payoff() > top) {
        top = tr.payoff();
        best.trajectory = std::move(tr);
      }
    }
  }
  best.payoff = best.trajectory.payoff();
  best.strategy = table_from(best.trajectory, policy, grids);
  return best;
}

SaddleReport verify_saddle(const GameConfig& cfg, const OperatorPolicy& policy,
                           const NatureResponder& responder, double epsilon,
                           std::size_t operator_deviations, std::size_t nature_deviations,
                           std::uint64_t seed) {
  const Grids grids = build_grids(cfg);
  check_policy(cfg, policy, grids);
  if (!(responder.grids == grids))
    throw StrategyMismatch("nature responder was built on a different partition or grids");

  const auto shared = std::make_shared<const NatureResponder>(responder);
  const NatureStrategy reply = ResponderNature{shared};

  SaddleReport rep;
  rep.epsilon = epsilon;
  rep.value = simulate_on(cfg, policy, grids, reply).payoff();
  std::mt19937_64 rng(seed);

  // Left chain: nature deviates, the operator keeps its policy.
  auto left = [&](const std::vector<double>& sched) {
    const double p = simulate_on(cfg, policy, grids, ScheduleNature{sched}).payoff();
    rep.left_max_violation = std::max(rep.left_max_violation, excess(p, rep.value));
    ++rep.left_tested;
  };
  const std::uint64_t total = schedule_count(grids);
  if (total <= nature_deviations) {
    rep.left_exhaustive = true;
    for (std::uint64_t code = 0; code < total; ++code) left(schedule_from_code(grids, code));
  } else {
    std::size_t widest = 0;
    for (const auto& q : grids.disturbances) widest = std::max(widest, q.size());
    for (std::size_t j = 0; j < widest && rep.left_tested < nature_deviations; ++j) {
      std::vector<double> sched;
      for (const auto& q : grids.disturbances) sched.push_back(q[std::min(j, q.size() - 1)]);
      left(sched);
    }
    while (rep.left_tested < nature_deviations) {
      std::vector<double> sched;
      for (const auto& q : grids.disturbances)
        sched.push_back(q[std::uniform_int_distribution<std::size_t>(0, q.size() - 1)(rng)]);
      left(sched);
    }
  }

  // Right chain: the operator deviates, nature keeps best-responding per stage.
  struct Swap {
    int step;
    std::size_t node;
    int control;
  };
  std::vector<Swap> swaps;
  for (int step = 1; step <= grids.steps(); ++step)
    for (std::size_t j = 0; j < grids.state.size(); ++j) {
      // Play reads the sentinel as control 0, so swapping to 0 is not a deviation.
      const int current = std::max(policy.index(step, j), 0);
      for (int c = 0; c < static_cast<int>(grids.controls[step - 1].size()); ++c)
        if (c != current) swaps.push_back({step, j, c});
    }
  std::size_t widest_t = 0;
  for (const auto& ts : grids.controls) widest_t = std::max(widest_t, ts.size());
  rep.operator_family_size = swaps.size() + widest_t;

  std::vector<std::size_t> members(rep.operator_family_size);
  std::iota(members.begin(), members.end(), std::size_t{0});
  if (members.size() > operator_deviations) {
    std::shuffle(members.begin(), members.end(), rng);
    members.resize(operator_deviations);
    std::sort(members.begin(), members.end());
  }
  for (const std::size_t m : members) {
    OperatorPolicy dev;
    if (m < swaps.size()) {
      dev = policy;
      const Swap& s = swaps[m];
      dev.control[static_cast<std::size_t>(s.step - 1)][s.node] = s.control;
    } else {
      dev = constant_policy(grids, static_cast<int>(m - swaps.size()));
    }
    const double p = simulate_on(cfg, dev, grids, reply).payoff();
    rep.right_max_violation = std::max(rep.right_max_violation, excess(rep.value, p));
    ++rep.right_tested;
  }

  rep.pass = rep.left_max_violation <= epsilon && rep.right_max_violation <= epsilon;
  return rep;
}

}  // namespace drygame
