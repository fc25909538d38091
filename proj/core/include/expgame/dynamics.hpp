#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "expgame/params.hpp"

namespace expgame {

/// Omega(p) = (1-p)/p. Throws DomainError at p in {0,1}.
[[nodiscard]] double odds_ratio(double p);

/// Public belief after `t` units of time at constant total effort `total_effort`
/// with no breakthrough: Omega(p(t)) = Omega(p0) exp(K lambda t).
/// The endpoints p0 = 0 and p0 = 1 are fixed points.
[[nodiscard]] double belief_path(double p0, double total_effort, double lambda, double t);

/// Time at which the first-best all-full-effort path reaches p_FB, clamped
/// below at zero. Throws DomainError when p_FB is outside (0,1).
[[nodiscard]] double t_fb(const GameParams& params, double p0);

/// One piece of a piecewise-constant effort profile; applies on
/// [t_start, next piece's t_start).
struct EffortPiece {
  double t_start = 0.0;
  std::vector<double> efforts;  // one entry per agent, each in [0,1]
};

/// Piecewise-constant, right-open effort path for all agents.
class EffortPath {
 public:
  EffortPath() = default;
  explicit EffortPath(std::size_t n_agents) : n_agents_(n_agents) {}

  /// Pieces must be appended in strictly increasing t_start order and the
  /// first one must start at 0.
  void append(double t_start, std::vector<double> efforts);

  [[nodiscard]] std::size_t n_agents() const noexcept { return n_agents_; }
  [[nodiscard]] const std::vector<EffortPiece>& pieces() const noexcept { return pieces_; }
  [[nodiscard]] bool empty() const noexcept { return pieces_.empty(); }

  /// Effort of `agent` at time t (right-open pieces). Zero before the first
  /// piece or when the path is empty.
  [[nodiscard]] double effort(std::size_t agent, double t) const;

  /// Constant single-piece path.
  static EffortPath constant(std::size_t n_agents, double effort);

  /// CSV with header `t_start,k_1,...,k_N`, rows sorted by t_start.
  [[nodiscard]] std::string to_csv() const;
  static EffortPath from_csv(const std::string& text);

 private:
  std::size_t n_agents_ = 0;
  std::vector<EffortPiece> pieces_;
};

enum class Role { Winner, Loser, NoBreakthrough };

/// Realized flow-equivalent payoff of `agent` on `path` for the given role:
///   int_0^tau r e^{-rt} pi_s (1-k(t)) dt + e^{-r tau} (r R_role + pi_role).
/// Pieces are integrated in closed form. `tau` = +inf is required for
/// NoBreakthrough and rejected (PreconditionError) for it otherwise.
[[nodiscard]] double realized_payoff(Role role, double tau, const EffortPath& path,
                                     const GameParams& params, std::size_t agent = 0);

/// Outcome of one play of the game.
struct Outcome {
  double tau = 0.0;                   // +inf when no breakthrough
  std::optional<std::size_t> winner;  // empty iff tau is +inf
  std::vector<double> terminal_efforts;
  std::vector<double> discounted_payoffs;
};

}  // namespace expgame
