#include "expgame/contracts.hpp"

#include <cmath>

#include "expgame/errors.hpp"

namespace expgame {

std::string_view to_string(ContractFamily family) noexcept {
  return family == ContractFamily::WinnerBased ? "WinnerBased" : "EffortBased";
}

ContractFamily family_from_string(std::string_view name) {
  if (name == "WinnerBased" || name == "winner") return ContractFamily::WinnerBased;
  if (name == "EffortBased" || name == "effort") return ContractFamily::EffortBased;
  throw InvalidParams("unknown contract family '" + std::string(name) + "'");
}

void require_valid(const ContractBase& base) {
  if (base.n_agents < 2) throw PreconditionError("contracts need n_agents >= 2");
  if (!std::isfinite(base.r_total) || !std::isfinite(base.pi_total)) {
    throw InvalidParams("contract totals must be finite");
  }
  if (!(base.discount > 0.0) || !std::isfinite(base.discount)) {
    throw InvalidParams("discount must be positive");
  }
  if (!(base.lambda > 0.0) || !std::isfinite(base.lambda)) {
    throw InvalidParams("lambda must be positive");
  }
  if (!(base.pi_s >= 0.0) || !std::isfinite(base.pi_s)) {
    throw InvalidParams("pi_s must be nonnegative");
  }
}

namespace {

void require_finite(const SharingContract& c) {
  if (!std::isfinite(c.alpha_i) || !std::isfinite(c.alpha_c)) {
    throw InvalidParams("contract shares must be finite");
  }
}

double loser_lump(const SharingContract& c, const ContractBase& b) {
  return (1.0 - c.alpha_i) * b.r_total / b.n_agents;
}

double loser_flow(const SharingContract& c, const ContractBase& b) {
  return (1.0 - c.alpha_c) * b.pi_total / b.n_agents;
}

}  // namespace

double guarantee(const SharingContract& contract, const ContractBase& base) {
  require_valid(base);
  require_finite(contract);
  // Written exactly like r * R_l + pi_l of the induced game.
  return base.discount * loser_lump(contract, base) + loser_flow(contract, base);
}

ContractDesign design_efficient(const ContractBase& base, FixedShare fixed, double value,
                                ContractFamily family, bool unobservable_actions) {
  require_valid(base);
  if (!std::isfinite(value)) throw InvalidParams("fixed share must be finite");
  const double n = base.n_agents;
  const double r = base.discount;
  ContractDesign out;
  out.contract.family = family;
  out.unobservable_actions = unobservable_actions;
  if (fixed == FixedShare::AlphaI) {
    if (base.pi_total == 0.0) {
      throw DesignError("alpha_c cannot be solved for: the continuation total is zero");
    }
    out.contract.alpha_i = value;
    out.contract.alpha_c = 1.0 - (n * base.pi_s - r * base.r_total * (1.0 - value)) / base.pi_total;
  } else {
    if (r * base.r_total == 0.0) {
      throw DesignError("alpha_i cannot be solved for: the instantaneous total is zero");
    }
    out.contract.alpha_c = value;
    out.contract.alpha_i =
        1.0 - (n * base.pi_s - base.pi_total * (1.0 - value)) / (r * base.r_total);
  }
  const auto flag = [&](double a, const char* name) {
    if (a < 0.0 || a > 1.0) {
      out.warnings.push_back(std::string(name) + " outside [0,1]: the contract implies side payments");
    }
  };
  flag(out.contract.alpha_i, "alpha_i");
  flag(out.contract.alpha_c, "alpha_c");
  if (family == ContractFamily::EffortBased && !(out.contract.alpha_c > 0.0)) {
    out.warnings.push_back(
        "effort-based contract with alpha_c <= 0 does not condition the continuation on effort; "
        "efficient effort needs alpha_c > 0");
  }
  return out;
}

GameParams induced_game(const SharingContract& contract, const ContractBase& base) {
  require_valid(base);
  require_finite(contract);
  GameParams g;
  g.n_agents = base.n_agents;
  g.lambda = base.lambda;
  g.discount = base.discount;
  g.pi_s = base.pi_s;
  g.r_l = loser_lump(contract, base);
  g.pi_l = loser_flow(contract, base);
  g.r_w = contract.alpha_i * base.r_total + g.r_l;
  g.pi_w = contract.alpha_c * base.pi_total + g.pi_l;
  return g;
}

Allocation allocate(const SharingContract& contract, const ContractBase& base,
                    std::size_t winner) {
  require_valid(base);
  require_finite(contract);
  const std::size_t n = static_cast<std::size_t>(base.n_agents);
  if (winner >= n) throw PreconditionError("winner index out of range");
  Allocation a;
  a.instantaneous.assign(n, loser_lump(contract, base));
  a.continuation.assign(n, loser_flow(contract, base));
  a.instantaneous[winner] += contract.alpha_i * base.r_total;
  a.continuation[winner] += contract.alpha_c * base.pi_total;
  return a;
}

Allocation allocate(const SharingContract& contract, const ContractBase& base,
                    std::span<const double> terminal_efforts) {
  require_valid(base);
  require_finite(contract);
  const std::size_t n = static_cast<std::size_t>(base.n_agents);
  if (terminal_efforts.size() != n) {
    throw PreconditionError("terminal effort profile must have one entry per agent");
  }
  double total = 0.0;
  for (double k : terminal_efforts) {
    if (!(k >= 0.0 && k <= 1.0)) throw PreconditionError("terminal efforts must lie in [0,1]");
    total += k;
  }
  if (!(total > 0.0)) {
    throw PreconditionError("effort-based shares are undefined at zero total terminal effort");
  }
  Allocation a;
  a.instantaneous.resize(n);
  a.continuation.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double share = terminal_efforts[i] / total;
    a.instantaneous[i] = contract.alpha_i * base.r_total * share + loser_lump(contract, base);
    a.continuation[i] = contract.alpha_c * base.pi_total * share + loser_flow(contract, base);
  }
  return a;
}

Allocation allocate(const SharingContract& contract, const ContractBase& base,
                    std::optional<std::size_t> winner, std::span<const double> terminal_efforts) {
  if (contract.family == ContractFamily::EffortBased) {
    return allocate(contract, base, terminal_efforts);
  }
  if (!winner) throw PreconditionError("winner-based allocation needs a winner");
  return allocate(contract, base, *winner);
}

Transfers loser_transfer(const GameParams& params) {
  require_valid_game(params);
  Transfers t;
  t.loser = (params.pi_s - params.pi_l) / params.discount - params.r_l;
  t.winner = -(params.n_agents - 1) * t.loser;
  return t;
}

GameParams apply_transfers(const GameParams& params, const Transfers& transfers) {
  GameParams g = params;
  g.r_l += transfers.loser;
  g.r_w += transfers.winner;
  return g;
}

}  // namespace expgame
