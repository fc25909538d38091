#pragma once

#include "expgame/params.hpp"

namespace expgame {

/// First-best threshold pi_s / (lambda R + (lambda/r)(Pi - N pi_s)).
/// Returns the raw formula value; callers needing (0,1) check it.
[[nodiscard]] double p_fb(const GameParams& params);

/// (1-p) Omega(p)^{r/(capacity lambda)}: the homogeneous solution of the
/// full-effort value ODE. Throws DomainError outside (0,1).
[[nodiscard]] double phi(double p, double capacity, double lambda, double r);

/// Same as phi() but defined on (0,1] with phi(1) = 0.
[[nodiscard]] double phi_total(double p, double capacity, double lambda, double r);

/// d/dp phi = -Omega^{a} (1 + a/p), a = r/(capacity lambda). Defined on (0,1).
[[nodiscard]] double phi_derivative(double p, double capacity, double lambda, double r);

/// Closed-form first-best solution: V(p) = pi_s for p <= p_fb, otherwise
/// slope * p + coefficient_c * phi(p).
class FirstBest {
 public:
  explicit FirstBest(const GameParams& params);

  [[nodiscard]] double p_fb() const noexcept { return p_fb_; }
  [[nodiscard]] double coefficient_c() const noexcept { return c_; }
  /// lambda (Pi/r + R) / (1 + N lambda / r): value of committing to full effort at p = 1.
  [[nodiscard]] double slope() const noexcept { return slope_; }

  [[nodiscard]] double value(double p) const;
  /// Analytic derivative; the right derivative at p_fb, 0 below it.
  [[nodiscard]] double derivative(double p) const;
  [[nodiscard]] double policy(double p) const;

  [[nodiscard]] const GameParams& params() const noexcept { return params_; }

 private:
  GameParams params_;
  double p_fb_ = 0.0;
  double c_ = 0.0;
  double slope_ = 0.0;
};

[[nodiscard]] double v_fb(const GameParams& params, double p);

/// Per-agent first-best effort: 1 if p > p_FB, 0 otherwise (0 at the threshold).
[[nodiscard]] double fb_policy(const GameParams& params, double p);

/// Residual of the cooperative HJB at (p, v, dv):
///   v - pi_s - max_{K in {0,N}} K (p (lambda/r)(Pi/N - v - (1-p) dv) - c(p)/N),
/// with c(p) = pi_s - p lambda R. The objective is linear in K so the max is
/// taken at the endpoints.
[[nodiscard]] double hjb_residual_coop(const GameParams& params, double p, double v, double dv);

}  // namespace expgame
