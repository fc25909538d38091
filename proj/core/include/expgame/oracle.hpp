#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "expgame/params.hpp"

namespace expgame {

/// Update order for the Bellman sweeps. Both converge to the same fixed
/// point; GaussSeidel sweeps beliefs upward so that the no-breakthrough
/// successor (always a lower belief) is already updated, which makes a
/// single sweep exact up to rounding.
enum class SweepOrder { GaussSeidel, Jacobi };

struct GridSpec {
  int n_points = 2001;
  double dt = 1e-3;
  long max_sweeps = 200000;
  double tol = 1e-8;
  SweepOrder order = SweepOrder::GaussSeidel;
};

/// Throws PreconditionError unless n_points >= 101, 0 < dt <= 0.1/(N lambda),
/// tol > 0 and max_sweeps >= 1.
void validate_grid(const GridSpec& grid, const GameParams& params);

/// n uniform points on [0,1], both endpoints included.
[[nodiscard]] std::vector<double> belief_grid(int n_points);

struct ValueTable {
  std::vector<double> beliefs;
  std::vector<double> values;
  /// Chosen effort: per agent in {0,1} (first-best: all agents together).
  std::vector<double> policy;
  /// Q(work) - Q(shirk) divided by (1 - e^{-r dt}), i.e. in flow units.
  /// Empty for policy evaluation.
  std::vector<double> action_gap;
  long sweeps = 0;
  double residual = 0.0;

  /// Piecewise-linear interpolation of the values.
  [[nodiscard]] double value_at(double p) const;
  /// Policy at the grid point nearest to p.
  [[nodiscard]] double policy_at(double p) const;
  /// Smallest grid belief at which the policy is positive; 1 if none.
  [[nodiscard]] double switch_belief() const;
  /// CSV with header `p,value,policy`.
  [[nodiscard]] std::string to_csv() const;
};

/// Called after every sweep with the sweep index (1-based) and current values.
using SweepObserver = std::function<void(long, std::span<const double>)>;

/// Average value of the planner problem, actions K in {0, N}.
[[nodiscard]] ValueTable dp_first_best(const GameParams& params, const GridSpec& grid,
                                       const SweepObserver& observer = {});

/// One agent's best response against the opponents' aggregate effort
/// (one entry per grid point, each in [0, N-1]); own action k in {0,1}.
[[nodiscard]] ValueTable dp_best_response(const GameParams& params,
                                          std::span<const double> opponents,
                                          const GridSpec& grid,
                                          const SweepObserver& observer = {});

/// Value of one agent playing `own` (effort in [0,1] per grid point) against
/// the opponents' aggregate effort.
[[nodiscard]] ValueTable dp_evaluate(const GameParams& params, std::span<const double> own,
                                     std::span<const double> opponents, const GridSpec& grid);

/// Tabulates a symmetric per-agent effort function on the oracle grid.
[[nodiscard]] std::vector<double> tabulate(const GridSpec& grid,
                                           const std::function<double(double)>& effort);

}  // namespace expgame
