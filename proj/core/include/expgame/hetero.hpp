#pragma once

#include <cstddef>
#include <vector>

#include "expgame/contracts.hpp"
#include "expgame/equilibrium.hpp"
#include "expgame/params.hpp"

namespace expgame {

/// Agents with different research capacities mu_i. Agent i's safe flow is
/// mu_i pi_s; the winner's payoffs are derived from the totals so that they
/// do not depend on who wins.
struct HeteroParams {
  std::vector<double> mu;
  double lambda = 1.0;
  double discount = 1.0;
  double pi_s = 1.0;
  std::vector<double> r_l;
  std::vector<double> pi_l;
  double r_total = 0.0;
  double pi_total = 0.0;

  [[nodiscard]] std::size_t size() const noexcept { return mu.size(); }
  /// M = sum of mu_i.
  [[nodiscard]] double capacity() const;
  /// R - sum_{j != i} R_{l,j}
  [[nodiscard]] double r_w(std::size_t i) const;
  /// Pi - sum_{j != i} pi_{l,j}
  [[nodiscard]] double pi_w(std::size_t i) const;
};

[[nodiscard]] ValidationReport validate(const HeteroParams& hp);
void require_valid(const HeteroParams& hp);

/// Capacity-one agents with symmetric loser payoffs.
[[nodiscard]] HeteroParams from_game(const GameParams& params);

[[nodiscard]] double p_fb_h(const HeteroParams& hp);

/// delta_i = (mu_i pi_s - pi_{l,i})/r - R_{l,i}
[[nodiscard]] std::vector<double> delta(const HeteroParams& hp);

[[nodiscard]] Threshold p_cross_h(const HeteroParams& hp);
[[nodiscard]] Threshold p_indiv_h(const HeteroParams& hp, std::size_t agent);

struct HeteroClassification {
  bool efficient = false;
  std::vector<double> deltas;
  std::vector<std::size_t> violating;  // agents with |delta_i| > 1e-12
  double delta_sum = 0.0;
};

[[nodiscard]] HeteroClassification classify_h(const HeteroParams& hp);

/// Total first-best value: M pi_s below p^H_FB, otherwise
/// A_M p + C phi_M(p) with capacity M.
[[nodiscard]] double v_fb_h(const HeteroParams& hp, double p);

/// (mu_i / M) V^H_FB(p); only defined when classify_h reports efficiency.
[[nodiscard]] double agent_value(const HeteroParams& hp, std::size_t agent, double p);

/// g = r R (1-alpha_I)/M + Pi (1-alpha_C)/M.
[[nodiscard]] double normalized_guarantee(const SharingContract& contract, const HeteroParams& hp);

/// G_i = mu_i g.
[[nodiscard]] std::vector<double> guarantee_h(const SharingContract& contract,
                                              const HeteroParams& hp);

/// Solves g = pi_s for the free share.
[[nodiscard]] ContractDesign design_efficient_h(const HeteroParams& hp, FixedShare fixed,
                                                double value,
                                                ContractFamily family = ContractFamily::WinnerBased);

/// Loser payoffs under the contract: R_{l,i} = (1-alpha_I) R mu_i / M and
/// pi_{l,i} = (1-alpha_C) Pi mu_i / M. Not validated.
[[nodiscard]] HeteroParams induced_hetero_game(const SharingContract& contract,
                                               const HeteroParams& hp);

/// Winner-based allocation with capacity weights mu_i / M in place of 1/N.
[[nodiscard]] Allocation allocate_h(const SharingContract& contract, const HeteroParams& hp,
                                    std::size_t winner);

/// Effort-based allocation by terminal efforts.
[[nodiscard]] Allocation allocate_h(const SharingContract& contract, const HeteroParams& hp,
                                    std::span<const double> terminal_efforts);

}  // namespace expgame
