#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "expgame/params.hpp"

namespace expgame {

enum class ContractFamily { WinnerBased, EffortBased };

[[nodiscard]] std::string_view to_string(ContractFamily family) noexcept;
/// Accepts "WinnerBased"/"winner" and "EffortBased"/"effort".
[[nodiscard]] ContractFamily family_from_string(std::string_view name);

/// Budget-balanced split of the breakthrough rewards. alpha_i is the share of
/// the lump sum R and alpha_c the share of the flow Pi that goes to the winner
/// (or, for the effort family, is split by terminal effort); the rest is split
/// equally. Values outside [0,1] are allowed and mean side payments.
struct SharingContract {
  ContractFamily family = ContractFamily::WinnerBased;
  double alpha_i = 1.0;
  double alpha_c = 1.0;
};

/// Totals the regulator distributes, plus what the induced game needs.
struct ContractBase {
  int n_agents = 2;
  double r_total = 0.0;   // R
  double pi_total = 0.0;  // Pi
  double discount = 1.0;
  double lambda = 1.0;
  double pi_s = 1.0;
};

void require_valid(const ContractBase& base);

/// Flow value a loser receives: r (1-alpha_I) R / N + (1-alpha_C) Pi / N.
[[nodiscard]] double guarantee(const SharingContract& contract, const ContractBase& base);

enum class FixedShare { AlphaI, AlphaC };

struct ContractDesign {
  SharingContract contract;
  std::vector<std::string> warnings;
  /// Unobservable-actions variant: same contract; verification is done in the
  /// time domain with Monte Carlo instead of with the belief DP.
  bool unobservable_actions = false;
};

/// Solves guarantee == pi_s for the free share. Throws DesignError when the
/// coefficient of the free share (r R / N or Pi / N) is zero.
[[nodiscard]] ContractDesign design_efficient(const ContractBase& base, FixedShare fixed,
                                              double value,
                                              ContractFamily family = ContractFamily::WinnerBased,
                                              bool unobservable_actions = false);

/// Symmetric game faced by the agents under the contract (both families).
[[nodiscard]] GameParams induced_game(const SharingContract& contract, const ContractBase& base);

struct Allocation {
  std::vector<double> instantaneous;
  std::vector<double> continuation;
};

/// Winner-based allocation.
[[nodiscard]] Allocation allocate(const SharingContract& contract, const ContractBase& base,
                                  std::size_t winner);

/// Effort-based allocation by terminal efforts k_i(tau)/K(tau). Throws
/// PreconditionError when K(tau) = 0.
[[nodiscard]] Allocation allocate(const SharingContract& contract, const ContractBase& base,
                                  std::span<const double> terminal_efforts);

/// Dispatches on the contract family.
[[nodiscard]] Allocation allocate(const SharingContract& contract, const ContractBase& base,
                                  std::optional<std::size_t> winner,
                                  std::span<const double> terminal_efforts);

struct Transfers {
  double loser = 0.0;   // lump sum paid to each loser
  double winner = 0.0;  // lump sum paid to the winner, -(N-1) * loser
};

/// Lump-sum transfer per loser that restores the knife-edge:
/// T_l = (pi_s - pi_l)/r - R_l.
[[nodiscard]] Transfers loser_transfer(const GameParams& params);

/// Adds the transfers to R_l and R_w.
[[nodiscard]] GameParams apply_transfers(const GameParams& params, const Transfers& transfers);

}  // namespace expgame
