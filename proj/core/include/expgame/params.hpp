#pragma once

#include <string>
#include <vector>

namespace expgame {

/// Primitives of the symmetric experimentation game.
///
/// Payoffs are per-role: the winner of the breakthrough receives the lump sum
/// `r_w` and continuation flow `pi_w`, every loser receives `r_l` and `pi_l`.
/// Totals are always derived, never stored. All value functions in this
/// library are flow-equivalent: lump sums enter multiplied by `discount`.
struct GameParams {
  int n_agents = 2;
  double lambda = 1.0;    // arrival rate per unit of effort-time
  double discount = 1.0;  // r
  double pi_s = 1.0;      // status-quo flow per unit effort
  double r_w = 0.0;
  double r_l = 0.0;
  double pi_w = 0.0;
  double pi_l = 0.0;

  /// R = R_w + (N-1) R_l
  [[nodiscard]] double total_lump() const noexcept {
    return r_w + (n_agents - 1) * r_l;
  }
  /// Pi = pi_w + (N-1) pi_l
  [[nodiscard]] double total_flow() const noexcept {
    return pi_w + (n_agents - 1) * pi_l;
  }

  friend bool operator==(const GameParams&, const GameParams&) = default;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  [[nodiscard]] bool ok() const noexcept { return errors.empty(); }
};

/// Checks the hard invariants (finite fields, N >= 1, lambda > 0, r > 0,
/// pi_s >= 0, Pi > N pi_s) and flags the soft ones (pi_w < pi_l, N = 1).
[[nodiscard]] ValidationReport validate(const GameParams& params);

/// Throws InvalidParams listing every hard violation.
void require_valid(const GameParams& params);

/// require_valid plus N >= 2, needed by every equilibrium operation.
void require_valid_game(const GameParams& params);

/// Throws DomainError unless 0 <= p <= 1.
void require_belief(double p, const char* what = "belief");

/// Throws DomainError unless 0 < p < 1.
void require_interior_belief(double p, const char* what = "belief");

}  // namespace expgame
