#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "expgame/oracle.hpp"
#include "expgame/params.hpp"

namespace expgame {

enum class Regime { Efficient, Undercompetitive, Overcompetitive };

[[nodiscard]] std::string_view to_string(Regime regime) noexcept;
/// Inverse of to_string(); throws PreconditionError on unknown names.
[[nodiscard]] Regime regime_from_string(std::string_view name);

/// A threshold belief that may be +inf. `degenerate` marks a nonpositive
/// denominator (as opposed to the parallel-level-curve case, which is a
/// regular +inf).
struct Threshold {
  double value = 0.0;
  bool degenerate = false;
};

/// Common intersection of the best-response level curves,
/// pi_s / (lambda (R_w - R_l) + (lambda/r)(pi_w - pi_l)).
[[nodiscard]] Threshold p_cross(const GameParams& params);

/// Single-agent stopping belief pi_s / (lambda R_w + (lambda/r)(pi_w - pi_s)).
[[nodiscard]] Threshold p_indiv(const GameParams& params);

/// s = (pi_s - pi_l)/r - R_l: zero on the efficiency knife-edge, negative when
/// losers gain from a breakthrough, positive when they are hurt by it.
[[nodiscard]] double efficiency_gap(const GameParams& params);

inline constexpr double kKnifeEdgeTol = 1e-12;
inline constexpr double kGeometryTol = 1e-10;

struct ThresholdSet {
  double p_fb = 0.0;
  double p_indiv = 0.0;
  double p_cross = 0.0;  // may be +inf
  bool p_indiv_degenerate = false;
  bool p_cross_degenerate = false;
  double efficiency_gap = 0.0;
  Regime regime = Regime::Efficient;
};

[[nodiscard]] ThresholdSet classify(const GameParams& params);

/// D_{K_{-i}}: pi_s + k_others (pi_s - p lambda (R_w - R_l) - (p lambda/r)(pi_w - pi_l)).
[[nodiscard]] double level_curve(const GameParams& params, double p, double k_others);

enum class BestResponse { Zero, Indifferent, Full };

[[nodiscard]] std::string_view to_string(BestResponse br) noexcept;

/// Position of (p, u) relative to the level curve of k_others.
[[nodiscard]] BestResponse best_response_region(const GameParams& params, double p, double u,
                                                double k_others);

/// Unique symmetric MPE when losers benefit from breakthroughs. Effort tapers
/// from 1 at p_dagger to 0 at p_stop = p_I along the indifference branch W;
/// above p_dagger everyone works and the value follows the full-effort ODE.
class UndercompEq {
 public:
  [[nodiscard]] double p_stop() const noexcept { return p_stop_; }
  [[nodiscard]] double c_star() const noexcept { return c_star_; }
  [[nodiscard]] double p_dagger() const noexcept { return p_dagger_; }
  [[nodiscard]] double c_upper() const noexcept { return c_upper_; }
  /// Sign (+1 or -1) of the (1-p) ln Omega(p) term that solved the interior ODE.
  [[nodiscard]] int interior_sign() const noexcept { return sign_; }

  /// Interior (indifference) branch, meaningful on [p_stop, p_dagger].
  [[nodiscard]] double w_value(double p) const;
  [[nodiscard]] double w_derivative(double p) const;
  /// p W + p(1-p) W' - (p (r R_w + pi_w) - r pi_s / lambda).
  [[nodiscard]] double interior_residual(double p) const;

  /// Full-effort branch continuous with W at p_dagger.
  [[nodiscard]] double upper_value(double p) const;
  [[nodiscard]] double upper_derivative(double p) const;

  /// Equilibrium value on [0,1]: pi_s, W, or the upper branch.
  [[nodiscard]] double value(double p) const;
  /// Symmetric effort: 0 at or below p_stop, k_dagger(p) on the interior
  /// branch, 1 at or above p_dagger.
  [[nodiscard]] double effort(double p) const;
  /// Raw k_dagger(p) formula without clamping.
  [[nodiscard]] double interior_effort(double p) const;

  [[nodiscard]] const GameParams& params() const noexcept { return params_; }

 private:
  friend UndercompEq solve_undercompetitive(const GameParams&);
  double interior_term(double p) const;

  GameParams params_;
  double p_stop_ = 0.0;
  double c_star_ = 0.0;
  double p_dagger_ = 0.0;
  double c_upper_ = 0.0;
  double slope_ = 0.0;
  double level_ = 0.0;  // r R_w + pi_w - (r/lambda) pi_s
  double log_coef_ = 0.0;  // r pi_s / lambda
  int sign_ = 1;
};

[[nodiscard]] UndercompEq solve_undercompetitive(const GameParams& params);

struct BeliefInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Cutoffs [p_cross, p_indiv] that support symmetric cutoff equilibria in the
/// overcompetitive regime. With allow_efficient the efficient regime yields
/// the degenerate interval {p_FB}; otherwise any other regime throws.
[[nodiscard]] BeliefInterval overcomp_family(const GameParams& params,
                                             bool allow_efficient = false);

/// Symmetric cutoff equilibrium at p_t. The value kinks downward at p_t.
class OvercompEq {
 public:
  [[nodiscard]] double p_t() const noexcept { return p_t_; }
  [[nodiscard]] double coefficient_c() const noexcept { return c_; }
  [[nodiscard]] double kink_right_derivative() const noexcept { return kink_; }
  [[nodiscard]] double value(double p) const;
  [[nodiscard]] double derivative(double p) const;
  [[nodiscard]] double effort(double p) const { return p > p_t_ ? 1.0 : 0.0; }

 private:
  friend OvercompEq solve_overcompetitive(const GameParams&, double);
  GameParams params_;
  double p_t_ = 0.0;
  double c_ = 0.0;
  double slope_ = 0.0;
  double kink_ = 0.0;
};

[[nodiscard]] OvercompEq solve_overcompetitive(const GameParams& params, double p_t);

/// Equilibrium value per regime; the overcompetitive regime needs a cutoff.
[[nodiscard]] double equilibrium_value(const GameParams& params, double p,
                                       std::optional<double> p_t = std::nullopt);

/// Matching symmetric per-agent effort.
[[nodiscard]] double equilibrium_effort(const GameParams& params, double p,
                                        std::optional<double> p_t = std::nullopt);

struct VerificationReport {
  Regime regime = Regime::Efficient;
  double max_deviation_gain = 0.0;
  double worst_belief = 0.0;       // belief where the gain is largest
  double deviation_effort = 0.0;   // best-response effort there
  double profile_effort = 0.0;     // profile effort there
  double tolerance = 0.0;
  bool pass = false;
};

inline constexpr double kDefaultMpeTolerance = 5e-3;

/// Checks a symmetric profile (per-agent effort at each oracle grid point) for
/// profitable unilateral deviations with the best-response DP.
[[nodiscard]] VerificationReport verify_mpe(const GameParams& params,
                                            std::span<const double> profile,
                                            const GridSpec& grid,
                                            double tolerance = kDefaultMpeTolerance);

}  // namespace expgame
