#include "expgame/hetero.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "expgame/errors.hpp"
#include "expgame/planner.hpp"

namespace expgame {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// R + (Pi - M pi_s)/r
double base_denominator(const HeteroParams& hp) {
  return hp.r_total + (hp.pi_total - hp.capacity() * hp.pi_s) / hp.discount;
}

Threshold threshold_from(const HeteroParams& hp, double denom) {
  if (!(denom > 0.0)) return {kInf, true};
  return {(hp.pi_s / hp.lambda) / denom, false};
}

}  // namespace

double HeteroParams::capacity() const { return sum(mu); }

double HeteroParams::r_w(std::size_t i) const { return r_total - (sum(r_l) - r_l.at(i)); }

double HeteroParams::pi_w(std::size_t i) const { return pi_total - (sum(pi_l) - pi_l.at(i)); }

ValidationReport validate(const HeteroParams& hp) {
  ValidationReport rep;
  const auto err = [&](std::string m) { rep.errors.push_back(std::move(m)); };
  const std::size_t n = hp.mu.size();
  if (n == 0) err("at least one agent is required");
  if (hp.r_l.size() != n || hp.pi_l.size() != n) {
    err("mu, r_l and pi_l must have the same length");
    return rep;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(hp.mu[i] > 0.0) || !std::isfinite(hp.mu[i])) err("mu[" + std::to_string(i) + "] must be positive");
    if (!std::isfinite(hp.r_l[i]) || !std::isfinite(hp.pi_l[i])) {
      err("loser payoffs of agent " + std::to_string(i) + " must be finite");
    }
  }
  if (!(hp.lambda > 0.0) || !std::isfinite(hp.lambda)) err("lambda must be positive");
  if (!(hp.discount > 0.0) || !std::isfinite(hp.discount)) err("discount must be positive");
  if (!(hp.pi_s >= 0.0) || !std::isfinite(hp.pi_s)) err("pi_s must be nonnegative");
  if (!std::isfinite(hp.r_total) || !std::isfinite(hp.pi_total)) err("totals must be finite");
  if (!rep.ok()) return rep;
  if (!(hp.pi_total > hp.capacity() * hp.pi_s)) {
    err("a breakthrough must be welfare-improving: Pi > M pi_s");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(hp.pi_w(i) > hp.mu[i] * hp.pi_s)) {
      err("agent " + std::to_string(i) + " must benefit from winning: pi_w > mu pi_s");
    }
  }
  if (n == 1) rep.warnings.push_back("single agent: no strategic interaction");
  return rep;
}

void require_valid(const HeteroParams& hp) {
  const ValidationReport rep = validate(hp);
  if (!rep.ok()) {
    std::string msg = "invalid heterogeneous parameters:";
    for (const auto& e : rep.errors) msg += " " + e + ";";
    throw InvalidParams(msg);
  }
}

HeteroParams from_game(const GameParams& params) {
  HeteroParams hp;
  const std::size_t n = static_cast<std::size_t>(params.n_agents);
  hp.mu.assign(n, 1.0);
  hp.lambda = params.lambda;
  hp.discount = params.discount;
  hp.pi_s = params.pi_s;
  hp.r_l.assign(n, params.r_l);
  hp.pi_l.assign(n, params.pi_l);
  hp.r_total = params.total_lump();
  hp.pi_total = params.total_flow();
  return hp;
}

double p_fb_h(const HeteroParams& hp) {
  require_valid(hp);
  if (hp.pi_s == 0.0) return 0.0;
  return hp.pi_s / (hp.lambda * hp.r_total +
                    (hp.lambda / hp.discount) * (hp.pi_total - hp.capacity() * hp.pi_s));
}

std::vector<double> delta(const HeteroParams& hp) {
  require_valid(hp);
  std::vector<double> d(hp.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = (hp.mu[i] * hp.pi_s - hp.pi_l[i]) / hp.discount - hp.r_l[i];
  }
  return d;
}

Threshold p_cross_h(const HeteroParams& hp) {
  return threshold_from(hp, base_denominator(hp) + sum(delta(hp)));
}

Threshold p_indiv_h(const HeteroParams& hp, std::size_t agent) {
  const std::vector<double> d = delta(hp);
  if (agent >= d.size()) throw PreconditionError("agent index out of range");
  double others = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (j != agent) others += d[j];
  }
  return threshold_from(hp, base_denominator(hp) + others);
}

HeteroClassification classify_h(const HeteroParams& hp) {
  require_valid(hp);
  if (hp.size() < 2) throw PreconditionError("classification needs at least two agents");
  HeteroClassification out;
  out.deltas = delta(hp);
  for (std::size_t i = 0; i < out.deltas.size(); ++i) {
    if (std::abs(out.deltas[i]) > kKnifeEdgeTol) out.violating.push_back(i);
  }
  out.delta_sum = sum(out.deltas);
  out.efficient = out.violating.empty();
  return out;
}

double v_fb_h(const HeteroParams& hp, double p) {
  require_belief(p);
  const double m = hp.capacity();
  const double threshold = p_fb_h(hp);
  const double safe = m * hp.pi_s;
  if (threshold >= 1.0 || p <= threshold) return safe;
  const double g = m * hp.lambda / hp.discount;
  const double slope = m * hp.lambda * (hp.pi_total / hp.discount + hp.r_total) / (1.0 + g);
  if (threshold <= 0.0) return slope * p;
  const double c = (safe - slope * threshold) / phi(threshold, m, hp.lambda, hp.discount);
  return slope * p + c * phi_total(p, m, hp.lambda, hp.discount);
}

double agent_value(const HeteroParams& hp, std::size_t agent, double p) {
  if (!classify_h(hp).efficient) {
    throw PreconditionError("per-agent values are only available on the efficient knife-edge");
  }
  if (agent >= hp.size()) throw PreconditionError("agent index out of range");
  return hp.mu[agent] * v_fb_h(hp, p) / hp.capacity();
}

double normalized_guarantee(const SharingContract& contract, const HeteroParams& hp) {
  require_valid(hp);
  const double m = hp.capacity();
  return hp.discount * hp.r_total * (1.0 - contract.alpha_i) / m +
         hp.pi_total * (1.0 - contract.alpha_c) / m;
}

std::vector<double> guarantee_h(const SharingContract& contract, const HeteroParams& hp) {
  const double g = normalized_guarantee(contract, hp);
  std::vector<double> out(hp.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = hp.mu[i] * g;
  return out;
}

ContractDesign design_efficient_h(const HeteroParams& hp, FixedShare fixed, double value,
                                  ContractFamily family) {
  require_valid(hp);
  if (!std::isfinite(value)) throw InvalidParams("fixed share must be finite");
  // g = pi_s is the homogeneous condition with N replaced by M.
  const double m = hp.capacity();
  ContractDesign out;
  out.contract.family = family;
  if (fixed == FixedShare::AlphaI) {
    if (hp.pi_total == 0.0) throw DesignError("alpha_c cannot be solved for: the continuation total is zero");
    out.contract.alpha_i = value;
    out.contract.alpha_c =
        1.0 - (m * hp.pi_s - hp.discount * hp.r_total * (1.0 - value)) / hp.pi_total;
  } else {
    if (hp.discount * hp.r_total == 0.0) {
      throw DesignError("alpha_i cannot be solved for: the instantaneous total is zero");
    }
    out.contract.alpha_c = value;
    out.contract.alpha_i =
        1.0 - (m * hp.pi_s - hp.pi_total * (1.0 - value)) / (hp.discount * hp.r_total);
  }
  for (auto [a, name] : {std::pair{out.contract.alpha_i, "alpha_i"},
                         std::pair{out.contract.alpha_c, "alpha_c"}}) {
    if (a < 0.0 || a > 1.0) {
      out.warnings.push_back(std::string(name) + " outside [0,1]: the contract implies side payments");
    }
  }
  if (family == ContractFamily::EffortBased && !(out.contract.alpha_c > 0.0)) {
    out.warnings.push_back("effort-based contract with alpha_c <= 0; efficient effort needs alpha_c > 0");
  }
  return out;
}

HeteroParams induced_hetero_game(const SharingContract& contract, const HeteroParams& hp) {
  HeteroParams out = hp;
  const double m = hp.capacity();
  for (std::size_t i = 0; i < hp.size(); ++i) {
    out.r_l[i] = (1.0 - contract.alpha_i) * hp.r_total * hp.mu[i] / m;
    out.pi_l[i] = (1.0 - contract.alpha_c) * hp.pi_total * hp.mu[i] / m;
  }
  return out;
}

Allocation allocate_h(const SharingContract& contract, const HeteroParams& hp, std::size_t winner) {
  require_valid(hp);
  if (winner >= hp.size()) throw PreconditionError("winner index out of range");
  std::vector<double> shares(hp.size(), 0.0);
  shares[winner] = hp.mu[winner];
  return allocate_h(SharingContract{ContractFamily::EffortBased, contract.alpha_i, contract.alpha_c},
                    hp, shares);
}

Allocation allocate_h(const SharingContract& contract, const HeteroParams& hp,
                      std::span<const double> terminal_efforts) {
  require_valid(hp);
  if (terminal_efforts.size() != hp.size()) {
    throw PreconditionError("terminal effort profile must have one entry per agent");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < hp.size(); ++i) {
    const double k = terminal_efforts[i];
    if (!(k >= 0.0 && k <= hp.mu[i])) {
      throw PreconditionError("terminal effort of agent " + std::to_string(i) + " outside [0, mu_i]");
    }
    total += k;
  }
  if (!(total > 0.0)) {
    throw PreconditionError("effort-based shares are undefined at zero total terminal effort");
  }
  const double m = hp.capacity();
  Allocation a;
  a.instantaneous.resize(hp.size());
  a.continuation.resize(hp.size());
  for (std::size_t i = 0; i < hp.size(); ++i) {
    const double share = terminal_efforts[i] / total;
    const double weight = hp.mu[i] / m;
    a.instantaneous[i] = (contract.alpha_i * share + (1.0 - contract.alpha_i) * weight) * hp.r_total;
    a.continuation[i] = (contract.alpha_c * share + (1.0 - contract.alpha_c) * weight) * hp.pi_total;
  }
  return a;
}

}  // namespace expgame
