#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expgame/contracts.hpp"
#include "expgame/dynamics.hpp"
#include "expgame/params.hpp"

namespace expgame {

struct SimConfig {
  double p0 = 1.0;
  double dt = 1e-3;
  double t_max = 50.0;
  long reps = 100000;
  std::uint64_t seed = 42;
  /// Forces the state instead of drawing it with probability p0.
  std::optional<bool> good_state;
  /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
  /// Keep every replication's Outcome in the returned statistics.
  bool keep_outcomes = false;
};

/// Throws PreconditionError unless p0 in [0,1], 0 < dt <= 0.05/(N lambda),
/// t_max finite and positive, reps >= 1.
void validate_sim(const SimConfig& cfg, int n_agents, double lambda);

/// Effort rule for all agents, either as a function of the public belief
/// (evaluated at the start of every step) or of calendar time.
class StrategyProfile {
 public:
  using BeliefRule = std::function<void(double belief, std::span<double> efforts)>;

  static StrategyProfile belief_indexed(std::size_t n_agents, BeliefRule rule);
  /// Every agent plays effort(p).
  static StrategyProfile symmetric(std::size_t n_agents, std::function<double(double)> effort);
  /// Full effort strictly above p_t, none at or below.
  static StrategyProfile cutoff(std::size_t n_agents, double p_t);
  /// Follows a calendar-time path; steps are split at the piece boundaries.
  static StrategyProfile time_indexed(EffortPath path);
  /// Full effort until t_stop, none afterwards.
  static StrategyProfile time_cutoff(std::size_t n_agents, double t_stop);

  [[nodiscard]] std::size_t n_agents() const noexcept { return n_agents_; }
  [[nodiscard]] bool is_belief_indexed() const noexcept { return static_cast<bool>(rule_); }
  [[nodiscard]] const BeliefRule& rule() const noexcept { return rule_; }
  [[nodiscard]] const EffortPath& path() const noexcept { return path_; }

 private:
  std::size_t n_agents_ = 0;
  BeliefRule rule_;
  EffortPath path_;
};

struct PayoffStats {
  std::vector<double> mean;       // per agent, flow units
  std::vector<double> std_error;  // sample std / sqrt(reps)
  double breakthrough_frequency = 0.0;
  double mean_tau = 0.0;  // NaN when no replication had a breakthrough
  long reps = 0;
  long breakthroughs = 0;
  std::vector<Outcome> outcomes;  // filled when SimConfig::keep_outcomes
};

/// Role-based payoffs of the game.
[[nodiscard]] PayoffStats simulate(const GameParams& params, const StrategyProfile& profile,
                                   const SimConfig& cfg);

/// Payoffs under a sharing contract: the induced game for the winner family,
/// terminal-effort shares for the effort family.
[[nodiscard]] PayoffStats simulate_with_contract(const ContractBase& base,
                                                 const SharingContract& contract,
                                                 const StrategyProfile& profile,
                                                 const SimConfig& cfg);

/// CSV with header `rep,tau,winner,payoff_1,...`; empty winner and tau = inf
/// when there was no breakthrough.
[[nodiscard]] std::string outcomes_to_csv(const PayoffStats& stats);

}  // namespace expgame
