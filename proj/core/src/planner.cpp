#include "expgame/planner.hpp"

#include <algorithm>
#include <cmath>

#include "expgame/dynamics.hpp"
#include "expgame/errors.hpp"

namespace expgame {

double p_fb(const GameParams& params) {
  require_valid(params);
  if (params.pi_s == 0.0) return 0.0;
  const double r = params.discount;
  const double lambda = params.lambda;
  const double n = params.n_agents;
  return params.pi_s /
         (lambda * params.total_lump() + (lambda / r) * (params.total_flow() - n * params.pi_s));
}

double phi(double p, double capacity, double lambda, double r) {
  require_interior_belief(p, "phi argument");
  return (1.0 - p) * std::pow(odds_ratio(p), r / (capacity * lambda));
}

double phi_total(double p, double capacity, double lambda, double r) {
  if (p == 1.0) return 0.0;
  return phi(p, capacity, lambda, r);
}

double phi_derivative(double p, double capacity, double lambda, double r) {
  require_interior_belief(p, "phi argument");
  const double a = r / (capacity * lambda);
  return -std::pow(odds_ratio(p), a) * (1.0 + a / p);
}

FirstBest::FirstBest(const GameParams& params) : params_(params) {
  require_valid(params);
  const double r = params.discount;
  const double lambda = params.lambda;
  const double n = params.n_agents;
  const double g = n * lambda / r;
  p_fb_ = expgame::p_fb(params);
  slope_ = lambda * (params.total_flow() / r + params.total_lump()) / (1.0 + g);
  if (p_fb_ > 0.0 && p_fb_ < 1.0) {
    c_ = params.pi_s * (1.0 - p_fb_) * g / ((1.0 + g) * phi(p_fb_, n, lambda, r));
  } else {
    c_ = 0.0;
  }
}

double FirstBest::value(double p) const {
  require_belief(p);
  if (p_fb_ >= 1.0 || p <= p_fb_) return params_.pi_s;
  return slope_ * p +
         c_ * phi_total(p, params_.n_agents, params_.lambda, params_.discount);
}

double FirstBest::derivative(double p) const {
  require_belief(p);
  if (p_fb_ >= 1.0 || p < p_fb_) return 0.0;
  if (p == 1.0) {
    // phi'(p) -> 0 as p -> 1 when r/(N lambda) > 0.
    return slope_;
  }
  return slope_ + c_ * phi_derivative(p, params_.n_agents, params_.lambda, params_.discount);
}

double FirstBest::policy(double p) const {
  require_belief(p);
  return p > p_fb_ ? 1.0 : 0.0;
}

double v_fb(const GameParams& params, double p) { return FirstBest(params).value(p); }

double fb_policy(const GameParams& params, double p) { return FirstBest(params).policy(p); }

double hjb_residual_coop(const GameParams& params, double p, double v, double dv) {
  require_valid(params);
  require_interior_belief(p);
  const double n = params.n_agents;
  const double r = params.discount;
  const double lambda = params.lambda;
  const double cost = params.pi_s - p * lambda * params.total_lump();
  const double per_unit =
      p * (lambda / r) * (params.total_flow() / n - v - (1.0 - p) * dv) - cost / n;
  const double best = std::max(0.0, n * per_unit);
  return v - params.pi_s - best;
}

}  // namespace expgame
