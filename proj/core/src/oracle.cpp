#include "expgame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "expgame/dynamics.hpp"
#include "expgame/errors.hpp"

namespace expgame {
namespace {

// Q = a + b ((1-w) V[m] + w V[m+1]) for one action at one grid point.
struct Transition {
  double effort = 0.0;  // reported in the policy table
  double a = 0.0;
  double b = 0.0;
  int m = 0;
  double w = 0.0;
};

struct Action {
  double effort;
  double total;
  double flow;
  double terminal;
};

Transition make_transition(const GameParams& params, const GridSpec& grid, double p,
                           const Action& act) {
  const double beta = std::exp(-params.discount * grid.dt);
  const double q = act.total > 0.0 ? p * (1.0 - std::exp(-act.total * params.lambda * grid.dt)) : 0.0;
  const double next = belief_path(p, act.total, params.lambda, grid.dt);
  const int n = grid.n_points;
  const double x = next * (n - 1);
  int m = std::min(static_cast<int>(std::floor(x)), n - 2);
  m = std::max(m, 0);
  Transition t;
  t.effort = act.effort;
  // Flow and arrival are discounted exactly within the step: the arrival
  // density is p K lambda e^{-K lambda s}, so no O(dt) bias shifts the switch.
  double a = (1.0 - beta) * act.flow;
  if (q > 0.0) {
    const double rate = act.total * params.lambda;
    const double mass = -std::expm1(-(rate + params.discount) * grid.dt) / (rate + params.discount);
    a = act.flow * ((1.0 - p) * (1.0 - beta) + p * params.discount * mass) +
        p * rate * mass * act.terminal;
  }
  t.a = a;
  t.b = beta * (1.0 - q);
  t.m = m;
  t.w = std::clamp(x - m, 0.0, 1.0);
  return t;
}

double q_value(const Transition& t, std::span<const double> v) {
  return t.a + t.b * ((1.0 - t.w) * v[t.m] + t.w * v[t.m + 1]);
}

// Value of action t at node j when V[j] itself is solved for and every other
// node is read from v.
double self_consistent(const Transition& t, int j, std::span<const double> v) {
  double rest = t.a;
  double self = 0.0;
  const double wm = t.b * (1.0 - t.w);
  const double wm1 = t.b * t.w;
  const auto add = [&](int node, double weight) {
    if (node == j) {
      self += weight;
    } else {
      rest += weight * v[node];
    }
  };
  add(t.m, wm);
  add(t.m + 1, wm1);
  return rest / (1.0 - self);
}

// Actions per grid point, ordered by increasing effort.
using ActionTable = std::vector<std::vector<Transition>>;

ValueTable solve(const GameParams& params, const GridSpec& grid, const ActionTable& actions,
                 bool with_gap, const SweepObserver& observer) {
  const int n = grid.n_points;
  ValueTable out;
  out.beliefs = belief_grid(n);
  std::vector<double> v(n, params.pi_s);
  std::vector<double> next(n);
  std::vector<int> choice(n, 0);

  double residual = 0.0;
  long sweep = 0;
  while (true) {
    ++sweep;
    residual = 0.0;
    if (grid.order == SweepOrder::GaussSeidel) {
      for (int j = 0; j < n; ++j) {
        double best = 0.0;
        int arg = -1;
        for (std::size_t a = 0; a < actions[j].size(); ++a) {
          const double q = self_consistent(actions[j][a], j, v);
          if (arg < 0 || q > best) {
            best = q;
            arg = static_cast<int>(a);
          }
        }
        residual = std::max(residual, std::abs(best - v[j]));
        v[j] = best;
        choice[j] = arg;
      }
    } else {
      for (int j = 0; j < n; ++j) {
        double best = 0.0;
        int arg = -1;
        for (std::size_t a = 0; a < actions[j].size(); ++a) {
          const double q = q_value(actions[j][a], v);
          if (arg < 0 || q > best) {
            best = q;
            arg = static_cast<int>(a);
          }
        }
        next[j] = best;
        choice[j] = arg;
        residual = std::max(residual, std::abs(best - v[j]));
      }
      v.swap(next);
    }
    if (observer) observer(sweep, v);
    if (residual <= grid.tol) break;
    if (sweep >= grid.max_sweeps) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "value iteration did not converge in %ld sweeps (residual %.3g)",
                    sweep, residual);
      throw NumericalError(buf);
    }
  }

  const double beta = std::exp(-params.discount * grid.dt);
  out.values = v;
  out.policy.resize(n);
  if (with_gap) out.action_gap.resize(n);
  for (int j = 0; j < n; ++j) {
    out.policy[j] = actions[j][choice[j]].effort;
    if (with_gap) {
      const double lo = q_value(actions[j].front(), v);
      const double hi = q_value(actions[j].back(), v);
      out.action_gap[j] = (hi - lo) / (1.0 - beta);
    }
  }
  out.sweeps = sweep;
  out.residual = residual;
  return out;
}

void check_table(std::span<const double> table, const GridSpec& grid, double lo, double hi,
                 const char* what) {
  if (table.size() != static_cast<std::size_t>(grid.n_points)) {
    throw PreconditionError(std::string(what) + " table must have one entry per grid point");
  }
  for (double x : table) {
    if (!(x >= lo - 1e-12 && x <= hi + 1e-12)) {
      throw PreconditionError(std::string(what) + " effort outside its admissible range");
    }
  }
}

}  // namespace

void validate_grid(const GridSpec& grid, const GameParams& params) {
  if (grid.n_points < 101) throw PreconditionError("oracle grid needs at least 101 points");
  const double dt_max = 0.1 / (params.n_agents * params.lambda);
  if (!(grid.dt > 0.0 && grid.dt <= dt_max)) {
    throw PreconditionError("oracle time step must lie in (0, 0.1/(N lambda)]");
  }
  if (!(grid.tol > 0.0)) throw PreconditionError("oracle tolerance must be positive");
  if (grid.max_sweeps < 1) throw PreconditionError("oracle sweep cap must be positive");
}

std::vector<double> belief_grid(int n_points) {
  std::vector<double> p(n_points);
  for (int j = 0; j < n_points; ++j) p[j] = static_cast<double>(j) / (n_points - 1);
  if (n_points > 0) p.back() = 1.0;
  return p;
}

double ValueTable::value_at(double p) const {
  require_belief(p);
  const int n = static_cast<int>(beliefs.size());
  const double x = p * (n - 1);
  const int m = std::clamp(static_cast<int>(std::floor(x)), 0, n - 2);
  const double w = x - m;
  return (1.0 - w) * values[m] + w * values[m + 1];
}

double ValueTable::policy_at(double p) const {
  require_belief(p);
  const int n = static_cast<int>(beliefs.size());
  const int j = std::clamp(static_cast<int>(std::lround(p * (n - 1))), 0, n - 1);
  return policy[j];
}

double ValueTable::switch_belief() const {
  for (std::size_t j = 0; j < policy.size(); ++j) {
    if (policy[j] > 0.0) return beliefs[j];
  }
  return 1.0;
}

std::string ValueTable::to_csv() const {
  std::string s = "p,value,policy\n";
  char buf[96];
  for (std::size_t j = 0; j < beliefs.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", beliefs[j], values[j], policy[j]);
    s += buf;
  }
  return s;
}

ValueTable dp_first_best(const GameParams& params, const GridSpec& grid,
                         const SweepObserver& observer) {
  require_valid(params);
  validate_grid(grid, params);
  const double n = params.n_agents;
  const double terminal = (params.discount * params.total_lump() + params.total_flow()) / n;
  const std::vector<double> p = belief_grid(grid.n_points);
  ActionTable actions(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    actions[j] = {make_transition(params, grid, p[j], {0.0, 0.0, params.pi_s, terminal}),
                  make_transition(params, grid, p[j], {1.0, n, 0.0, terminal})};
  }
  return solve(params, grid, actions, true, observer);
}

ValueTable dp_best_response(const GameParams& params, std::span<const double> opponents,
                            const GridSpec& grid, const SweepObserver& observer) {
  require_valid(params);
  validate_grid(grid, params);
  check_table(opponents, grid, 0.0, params.n_agents - 1, "opponent");
  const double r = params.discount;
  const double win = r * params.r_w + params.pi_w;
  const double lose = r * params.r_l + params.pi_l;
  const std::vector<double> p = belief_grid(grid.n_points);
  ActionTable actions(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double others = std::max(0.0, opponents[j]);
    actions[j].reserve(2);
    for (double k : {0.0, 1.0}) {
      const double total = k + others;
      const double terminal = total > 0.0 ? (k * win + others * lose) / total : 0.0;
      actions[j].push_back(
          make_transition(params, grid, p[j], {k, total, params.pi_s * (1.0 - k), terminal}));
    }
  }
  return solve(params, grid, actions, true, observer);
}

ValueTable dp_evaluate(const GameParams& params, std::span<const double> own,
                       std::span<const double> opponents, const GridSpec& grid) {
  require_valid(params);
  validate_grid(grid, params);
  check_table(own, grid, 0.0, 1.0, "own");
  check_table(opponents, grid, 0.0, params.n_agents - 1, "opponent");
  const double r = params.discount;
  const double win = r * params.r_w + params.pi_w;
  const double lose = r * params.r_l + params.pi_l;
  const std::vector<double> p = belief_grid(grid.n_points);
  ActionTable actions(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double k = std::clamp(own[j], 0.0, 1.0);
    const double others = std::max(0.0, opponents[j]);
    const double total = k + others;
    const double terminal = total > 0.0 ? (k * win + others * lose) / total : 0.0;
    actions[j] = {make_transition(params, grid, p[j], {k, total, params.pi_s * (1.0 - k), terminal})};
  }
  return solve(params, grid, actions, false, {});
}

std::vector<double> tabulate(const GridSpec& grid, const std::function<double(double)>& effort) {
  std::vector<double> p = belief_grid(grid.n_points);
  for (double& x : p) x = effort(x);
  return p;
}

}  // namespace expgame
