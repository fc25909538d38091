#include "expgame/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "expgame/dynamics.hpp"
#include "expgame/errors.hpp"
#include "expgame/planner.hpp"
#include "expgame/roots.hpp"

namespace expgame {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// pi_s - p lambda (R_w - R_l) - (p lambda / r)(pi_w - pi_l)
double level_factor(const GameParams& g, double p) {
  return g.pi_s - p * g.lambda * (g.r_w - g.r_l) - (p * g.lambda / g.discount) * (g.pi_w - g.pi_l);
}

double log_shape(double p) { return (1.0 - p) * std::log(odds_ratio(p)); }

double log_shape_derivative(double p) { return -std::log(odds_ratio(p)) - 1.0 / p; }

}  // namespace

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::Efficient: return "Efficient";
    case Regime::Undercompetitive: return "Undercompetitive";
    case Regime::Overcompetitive: return "Overcompetitive";
  }
  return "Efficient";
}

Regime regime_from_string(std::string_view name) {
  if (name == "Efficient") return Regime::Efficient;
  if (name == "Undercompetitive") return Regime::Undercompetitive;
  if (name == "Overcompetitive") return Regime::Overcompetitive;
  throw PreconditionError("unknown regime '" + std::string(name) + "'");
}

std::string_view to_string(BestResponse br) noexcept {
  switch (br) {
    case BestResponse::Zero: return "Zero";
    case BestResponse::Indifferent: return "Indifferent";
    case BestResponse::Full: return "Full";
  }
  return "Zero";
}

Threshold p_cross(const GameParams& params) {
  require_valid(params);
  if (params.r_w == params.r_l && params.pi_w == params.pi_l) return {kInf, false};
  const double denom = params.lambda * (params.r_w - params.r_l) +
                       (params.lambda / params.discount) * (params.pi_w - params.pi_l);
  if (!(denom > 0.0)) return {kInf, true};
  return {params.pi_s / denom, false};
}

Threshold p_indiv(const GameParams& params) {
  require_valid(params);
  const double denom = params.lambda * params.r_w +
                       (params.lambda / params.discount) * (params.pi_w - params.pi_s);
  if (!(denom > 0.0)) return {kInf, true};
  return {params.pi_s / denom, false};
}

double efficiency_gap(const GameParams& params) {
  require_valid(params);
  return (params.pi_s - params.pi_l) / params.discount - params.r_l;
}

ThresholdSet classify(const GameParams& params) {
  require_valid_game(params);
  ThresholdSet out;
  out.p_fb = p_fb(params);
  const Threshold pi = p_indiv(params);
  const Threshold px = p_cross(params);
  out.p_indiv = pi.value;
  out.p_indiv_degenerate = pi.degenerate;
  out.p_cross = px.value;
  out.p_cross_degenerate = px.degenerate;
  out.efficiency_gap = efficiency_gap(params);
  if (std::abs(out.efficiency_gap) <= kKnifeEdgeTol) {
    out.regime = Regime::Efficient;
  } else if (out.efficiency_gap < 0.0) {
    out.regime = Regime::Undercompetitive;
  } else {
    out.regime = Regime::Overcompetitive;
  }
  return out;
}

double level_curve(const GameParams& params, double p, double k_others) {
  require_valid(params);
  return params.pi_s + k_others * level_factor(params, p);
}

BestResponse best_response_region(const GameParams& params, double p, double u,
                                  double k_others) {
  const double diff = u - level_curve(params, p, k_others);
  if (std::abs(diff) <= kGeometryTol) return BestResponse::Indifferent;
  return diff < 0.0 ? BestResponse::Zero : BestResponse::Full;
}

// ---------------------------------------------------------------------------
// Undercompetitive

double UndercompEq::interior_term(double p) const { return sign_ * log_coef_ * log_shape(p); }

double UndercompEq::w_value(double p) const {
  require_interior_belief(p, "interior-branch belief");
  return level_ + interior_term(p) + c_star_ * (1.0 - p);
}

double UndercompEq::w_derivative(double p) const {
  require_interior_belief(p, "interior-branch belief");
  return sign_ * log_coef_ * log_shape_derivative(p) - c_star_;
}

double UndercompEq::interior_residual(double p) const {
  const GameParams& g = params_;
  const double rhs = p * (g.discount * g.r_w + g.pi_w) - g.discount * g.pi_s / g.lambda;
  return p * w_value(p) + p * (1.0 - p) * w_derivative(p) - rhs;
}

double UndercompEq::upper_value(double p) const {
  require_belief(p);
  return slope_ * p + c_upper_ * phi_total(p, params_.n_agents, params_.lambda, params_.discount);
}

double UndercompEq::upper_derivative(double p) const {
  require_belief(p);
  if (p == 1.0) return slope_;
  return slope_ + c_upper_ * phi_derivative(p, params_.n_agents, params_.lambda, params_.discount);
}

double UndercompEq::value(double p) const {
  require_belief(p);
  if (p <= p_stop_) return params_.pi_s;
  if (p <= p_dagger_) return w_value(p);
  return upper_value(p);
}

double UndercompEq::interior_effort(double p) const {
  return (w_value(p) - params_.pi_s) / ((params_.n_agents - 1) * level_factor(params_, p));
}

double UndercompEq::effort(double p) const {
  require_belief(p);
  if (p <= p_stop_) return 0.0;
  if (p >= p_dagger_) return 1.0;
  return std::clamp(interior_effort(p), 0.0, 1.0);
}

UndercompEq solve_undercompetitive(const GameParams& params) {
  const ThresholdSet th = classify(params);
  if (th.regime != Regime::Undercompetitive) {
    throw PreconditionError("undercompetitive construction requires the undercompetitive regime, got " +
                            std::string(to_string(th.regime)));
  }
  if (th.p_indiv_degenerate || !(th.p_indiv > 0.0 && th.p_indiv < 1.0)) {
    throw PreconditionError("undercompetitive construction requires p_indiv in (0,1)");
  }
  const double r = params.discount;
  const double lambda = params.lambda;

  UndercompEq eq;
  eq.params_ = params;
  eq.p_stop_ = th.p_indiv;
  eq.level_ = r * params.r_w + params.pi_w - (r / lambda) * params.pi_s;
  eq.log_coef_ = r * params.pi_s / lambda;
  eq.slope_ = FirstBest(params).slope();

  const double hi = std::min(th.p_cross, 1.0 - 1e-9);
  if (!(hi > eq.p_stop_)) {
    throw NumericalError("empty bracket for the full-effort switch belief");
  }

  // Pick the sign of the logarithmic term that actually solves the interior ODE.
  const double scale = 1.0 + std::abs(r * params.r_w + params.pi_w) + eq.log_coef_;
  bool found = false;
  for (int sign : {+1, -1}) {
    eq.sign_ = sign;
    eq.c_star_ = (params.pi_s - eq.level_ - eq.interior_term(eq.p_stop_)) / (1.0 - eq.p_stop_);
    double worst = 0.0;
    constexpr int kProbe = 64;
    for (int j = 0; j <= kProbe; ++j) {
      const double p = eq.p_stop_ + (hi - eq.p_stop_) * j / kProbe;
      worst = std::max(worst, std::abs(eq.interior_residual(p)));
    }
    if (worst <= 1e-9 * scale) {
      found = true;
      break;
    }
  }
  if (!found) throw NumericalError("no sign convention solves the interior value ODE");

  const auto gap = [&](double p) {
    return eq.w_value(p) - level_curve(params, p, params.n_agents - 1);
  };
  eq.p_dagger_ = bisect(gap, eq.p_stop_, hi, 1e-12);
  eq.c_upper_ = (eq.w_value(eq.p_dagger_) - eq.slope_ * eq.p_dagger_) /
                phi(eq.p_dagger_, params.n_agents, lambda, r);
  return eq;
}

// ---------------------------------------------------------------------------
// Overcompetitive

BeliefInterval overcomp_family(const GameParams& params, bool allow_efficient) {
  const ThresholdSet th = classify(params);
  if (th.regime == Regime::Efficient && allow_efficient) return {th.p_fb, th.p_fb};
  if (th.regime != Regime::Overcompetitive) {
    throw PreconditionError("cutoff family requires the overcompetitive regime, got " +
                            std::string(to_string(th.regime)));
  }
  return {th.p_cross, th.p_indiv};
}

double OvercompEq::value(double p) const {
  require_belief(p);
  if (p <= p_t_) return params_.pi_s;
  return slope_ * p + c_ * phi_total(p, params_.n_agents, params_.lambda, params_.discount);
}

double OvercompEq::derivative(double p) const {
  require_belief(p);
  if (p < p_t_) return 0.0;
  if (p == 1.0) return slope_;
  return slope_ + c_ * phi_derivative(p, params_.n_agents, params_.lambda, params_.discount);
}

OvercompEq solve_overcompetitive(const GameParams& params, double p_t) {
  const BeliefInterval family = overcomp_family(params);
  if (!(p_t >= family.lo - kGeometryTol && p_t <= family.hi + kGeometryTol)) {
    throw PreconditionError("cutoff " + std::to_string(p_t) + " outside the equilibrium family [" +
                            std::to_string(family.lo) + ", " + std::to_string(family.hi) + "]");
  }
  require_interior_belief(p_t, "cutoff");
  const double r = params.discount;
  const double lambda = params.lambda;
  const double n = params.n_agents;
  OvercompEq eq;
  eq.params_ = params;
  eq.p_t_ = p_t;
  eq.slope_ = FirstBest(params).slope();
  eq.c_ = (params.pi_s - eq.slope_ * p_t) / phi(p_t, n, lambda, r);
  eq.kink_ = (r / (n * p_t * (1.0 - p_t) * lambda)) * (p_t * params.pi_s / p_fb(params) - params.pi_s);
  return eq;
}

// ---------------------------------------------------------------------------

double equilibrium_value(const GameParams& params, double p, std::optional<double> p_t) {
  require_belief(p);
  switch (classify(params).regime) {
    case Regime::Efficient: return v_fb(params, p);
    case Regime::Undercompetitive: return solve_undercompetitive(params).value(p);
    case Regime::Overcompetitive:
      if (!p_t) throw PreconditionError("the overcompetitive regime needs a cutoff belief");
      return solve_overcompetitive(params, *p_t).value(p);
  }
  return 0.0;
}

double equilibrium_effort(const GameParams& params, double p, std::optional<double> p_t) {
  require_belief(p);
  switch (classify(params).regime) {
    case Regime::Efficient: return fb_policy(params, p);
    case Regime::Undercompetitive: return solve_undercompetitive(params).effort(p);
    case Regime::Overcompetitive:
      if (!p_t) throw PreconditionError("the overcompetitive regime needs a cutoff belief");
      return solve_overcompetitive(params, *p_t).effort(p);
  }
  return 0.0;
}

VerificationReport verify_mpe(const GameParams& params, std::span<const double> profile,
                              const GridSpec& grid, double tolerance) {
  require_valid_game(params);
  validate_grid(grid, params);
  if (profile.size() != static_cast<std::size_t>(grid.n_points)) {
    throw PreconditionError("profile must have one entry per oracle grid point");
  }
  std::vector<double> opponents(profile.size());
  const double others = params.n_agents - 1;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (!(profile[j] >= 0.0 && profile[j] <= 1.0)) {
      throw PreconditionError("profile efforts must lie in [0,1]");
    }
    opponents[j] = others * profile[j];
  }
  const ValueTable best = dp_best_response(params, opponents, grid);
  const ValueTable own = dp_evaluate(params, profile, opponents, grid);

  VerificationReport report;
  report.regime = classify(params).regime;
  report.tolerance = tolerance;
  report.max_deviation_gain = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < profile.size(); ++j) {
    const double gain = best.values[j] - own.values[j];
    if (gain > report.max_deviation_gain) {
      report.max_deviation_gain = gain;
      report.worst_belief = best.beliefs[j];
      report.deviation_effort = best.policy[j];
      report.profile_effort = profile[j];
    }
  }
  report.pass = report.max_deviation_gain <= tolerance;
  return report;
}

}  // namespace expgame
