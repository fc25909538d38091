#include "cli.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"

#include "expgame/contracts.hpp"
#include "expgame/dynamics.hpp"
#include "expgame/equilibrium.hpp"
#include "expgame/errors.hpp"
#include "expgame/hetero.hpp"
#include "expgame/io.hpp"
#include "expgame/montecarlo.hpp"
#include "expgame/oracle.hpp"
#include "expgame/planner.hpp"

namespace expgame::cli {
namespace {

using Json = nlohmann::ordered_json;

// Non-finite doubles are not valid JSON numbers; they are written as strings.
Json num(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

Json num_list(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

Json strings(const std::vector<std::string>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(x);
  return a;
}

std::pair<FixedShare, double> parse_fix(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw InvalidParams("--fix expects KEY=VALUE, got '" + spec + "'");
  const std::string key = spec.substr(0, eq);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(spec.substr(eq + 1), &used);
    if (used != spec.size() - eq - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw InvalidParams("--fix value is not a number: '" + spec + "'");
  }
  if (key == "alpha-i" || key == "alpha_i") return {FixedShare::AlphaI, value};
  if (key == "alpha-c" || key == "alpha_c") return {FixedShare::AlphaC, value};
  throw InvalidParams("--fix key must be alpha-i or alpha-c, got '" + key + "'");
}

Json thresholds_json(const ThresholdSet& th) {
  Json j;
  j["p_fb"] = num(th.p_fb);
  j["p_indiv"] = num(th.p_indiv);
  j["p_cross"] = num(th.p_cross);
  j["regime"] = std::string(to_string(th.regime));
  if (th.p_indiv_degenerate) j["p_indiv_degenerate"] = true;
  if (th.p_cross_degenerate) j["p_cross_degenerate"] = true;
  return j;
}

Json report_json(const VerificationReport& r) {
  Json j;
  j["regime"] = std::string(to_string(r.regime));
  j["max_deviation_gain"] = num(r.max_deviation_gain);
  j["pass"] = r.pass;
  j["tolerance"] = num(r.tolerance);
  j["worst_belief"] = num(r.worst_belief);
  j["deviation_effort"] = num(r.deviation_effort);
  j["profile_effort"] = num(r.profile_effort);
  return j;
}

Json contract_json(const SharingContract& c) {
  Json j;
  j["family"] = std::string(to_string(c.family));
  j["alpha_i"] = num(c.alpha_i);
  j["alpha_c"] = num(c.alpha_c);
  return j;
}

Json allocation_json(const Allocation& a) {
  Json j;
  j["instantaneous"] = num_list(a.instantaneous);
  j["continuation"] = num_list(a.continuation);
  return j;
}

Json params_json(const GameParams& g) { return Json::parse(to_json(g)); }

std::vector<double> uniform_points(int n, double lo, double hi) {
  if (n < 2) throw InvalidParams("curves need at least two points");
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) throw InvalidParams("curve range must satisfy 0 <= lo < hi <= 1");
  std::vector<double> p(n);
  for (int j = 0; j < n; ++j) p[j] = lo + (hi - lo) * j / (n - 1);
  p.back() = hi;
  return p;
}

// Symmetric equilibrium effort rule for simulation and verification.
std::function<double(double)> equilibrium_rule(const GameParams& g, std::optional<double> p_t) {
  const ThresholdSet th = classify(g);
  switch (th.regime) {
    case Regime::Efficient: {
      const double c = th.p_fb;
      return [c](double p) { return p > c ? 1.0 : 0.0; };
    }
    case Regime::Undercompetitive: {
      auto eq = std::make_shared<UndercompEq>(solve_undercompetitive(g));
      return [eq](double p) { return eq->effort(p); };
    }
    case Regime::Overcompetitive: {
      const double c = solve_overcompetitive(g, p_t.value_or(th.p_indiv)).p_t();
      return [c](double p) { return p > c ? 1.0 : 0.0; };
    }
  }
  return {};
}

struct Options {
  std::string params_file;
  std::string contract_file;
  std::string thresholds_file;
  std::string out_file;
  std::vector<double> beliefs;
  std::optional<double> p_t;
  std::uint64_t seed = 42;
  int grid = 2001;
  double dt = 1e-3;
  double tol = 1e-8;
  long reps = 100000;
  double p0 = 1.0;
  double t_max = 50.0;
  std::optional<double> t_stop;
  std::string profile = "equilibrium";
  std::string mode = "first-best";
  std::string kind = "level";
  std::optional<double> opponent_cutoff;
  bool verify = false;
  bool per_rep = false;
  int points = 1001;
  double lo = 0.001;
  double hi = 0.999;
  std::string state;
  // contract base
  double r_total = 0.0;
  double pi_total = 0.0;
  int n = 2;
  double pi_s = 1.0;
  double discount = 1.0;
  double lambda = 1.0;
  std::string fix;
  std::string family = "WinnerBased";
  std::optional<double> alpha_i;
  std::optional<double> alpha_c;
  std::optional<long> winner;
  std::vector<double> efforts;
  bool unobservable = false;
};

GameParams load_params(const Options& o) {
  if (o.params_file.empty()) throw InvalidParams("--params FILE is required");
  GameParams g = game_params_from_json(read_text_file(o.params_file));
  require_valid(g);
  return g;
}

GridSpec make_grid(const Options& o) {
  GridSpec g;
  g.n_points = o.grid;
  g.dt = o.dt;
  g.tol = o.tol;
  return g;
}

ContractBase base_from(const Options& o) {
  ContractBase b;
  b.n_agents = o.n;
  b.r_total = o.r_total;
  b.pi_total = o.pi_total;
  b.discount = o.discount;
  b.lambda = o.lambda;
  b.pi_s = o.pi_s;
  require_valid(b);
  return b;
}

SharingContract contract_from(const Options& o) {
  if (!o.contract_file.empty()) return contract_from_json(read_text_file(o.contract_file));
  if (!o.alpha_i || !o.alpha_c) {
    throw InvalidParams("a contract needs --contract FILE or both --alpha-i and --alpha-c");
  }
  return {family_from_string(o.family), *o.alpha_i, *o.alpha_c};
}

std::string emit(const Options& o, const std::string& payload) {
  if (!o.out_file.empty()) {
    write_text_file(o.out_file, payload);
    return {};
  }
  return payload;
}

// ---------------------------------------------------------------------------

std::string cmd_validate(const Options& o, int& code) {
  if (o.params_file.empty()) throw InvalidParams("--params FILE is required");
  const GameParams g = game_params_from_json(read_text_file(o.params_file));
  const ValidationReport rep = validate(g);
  Json j;
  j["ok"] = rep.ok();
  j["errors"] = strings(rep.errors);
  j["warnings"] = strings(rep.warnings);
  if (!rep.ok()) code = kInvalidParams;
  return j.dump();
}

std::string cmd_thresholds(const Options& o) {
  return thresholds_json(classify(load_params(o))).dump();
}

std::string cmd_classify(const Options& o) {
  const ThresholdSet th = classify(load_params(o));
  Json j;
  j["regime"] = std::string(to_string(th.regime));
  j["efficiency_gap"] = num(th.efficiency_gap);
  const Json thresholds = thresholds_json(th);
  for (const auto& [k, v] : thresholds.items()) {
    if (k != "regime") j[k] = v;
  }
  return j.dump();
}

std::string cmd_first_best(const Options& o) {
  const GameParams g = load_params(o);
  const FirstBest fb(g);
  Json j;
  j["p_fb"] = num(fb.p_fb());
  j["slope"] = num(fb.slope());
  j["coefficient_c"] = num(fb.coefficient_c());
  Json values = Json::array();
  for (double p : o.beliefs) {
    Json row;
    row["p"] = num(p);
    row["value"] = num(fb.value(p));
    row["policy"] = num(fb.policy(p));
    if (p > 0.0 && p < 1.0) row["t_fb"] = num(fb.p_fb() > 0.0 && fb.p_fb() < 1.0 ? t_fb(g, p) : 0.0);
    values.push_back(row);
  }
  j["values"] = values;
  return j.dump();
}

std::string cmd_equilibrium(const Options& o) {
  const GameParams g = load_params(o);
  const ThresholdSet th = classify(g);
  if (!o.thresholds_file.empty()) {
    const Json t = Json::parse(read_text_file(o.thresholds_file), nullptr, false);
    if (t.is_discarded() || !t.is_object() || !t.contains("regime") || !t["regime"].is_string()) {
      throw InvalidParams("thresholds file must be a JSON object with a 'regime' string");
    }
    const Regime claimed = regime_from_string(t["regime"].get<std::string>());
    if (claimed != th.regime) {
      throw PreconditionError("thresholds file says " + std::string(to_string(claimed)) +
                              " but the parameters are " + std::string(to_string(th.regime)));
    }
  }
  Json j = thresholds_json(th);
  std::function<double(double)> value;
  std::function<double(double)> effort;
  switch (th.regime) {
    case Regime::Efficient: {
      auto fb = std::make_shared<FirstBest>(g);
      j["cutoff"] = num(fb->p_fb());
      value = [fb](double p) { return fb->value(p); };
      effort = [fb](double p) { return fb->policy(p); };
      break;
    }
    case Regime::Undercompetitive: {
      auto eq = std::make_shared<UndercompEq>(solve_undercompetitive(g));
      j["p_stop"] = num(eq->p_stop());
      j["c_star"] = num(eq->c_star());
      j["p_dagger"] = num(eq->p_dagger());
      j["c_upper"] = num(eq->c_upper());
      j["interior_sign"] = eq->interior_sign();
      value = [eq](double p) { return eq->value(p); };
      effort = [eq](double p) { return eq->effort(p); };
      break;
    }
    case Regime::Overcompetitive: {
      const BeliefInterval fam = overcomp_family(g);
      auto eq = std::make_shared<OvercompEq>(solve_overcompetitive(g, o.p_t.value_or(fam.hi)));
      j["family"] = Json::array({num(fam.lo), num(fam.hi)});
      j["payoff_dominant_p_t"] = num(fam.hi);
      j["p_t"] = num(eq->p_t());
      j["kink_right_derivative"] = num(eq->kink_right_derivative());
      value = [eq](double p) { return eq->value(p); };
      effort = [eq](double p) { return eq->effort(p); };
      break;
    }
  }
  Json values = Json::array();
  for (double p : o.beliefs) {
    require_belief(p);
    Json row;
    row["p"] = num(p);
    row["value"] = num(value(p));
    row["effort"] = num(effort(p));
    values.push_back(row);
  }
  j["values"] = values;
  if (o.verify) {
    const GridSpec grid = make_grid(o);
    j["verification"] = report_json(verify_mpe(g, tabulate(grid, effort), grid));
  }
  return j.dump();
}

std::string cmd_contract_design(const Options& o) {
  if (o.fix.empty()) throw InvalidParams("contract design needs --fix alpha-i=V or --fix alpha-c=V");
  const auto [which, value] = parse_fix(o.fix);
  const ContractBase base = base_from(o);
  const ContractDesign d =
      design_efficient(base, which, value, family_from_string(o.family), o.unobservable);
  Json j = contract_json(d.contract);
  j["guarantee"] = num(guarantee(d.contract, base));
  j["warnings"] = strings(d.warnings);
  j["verification_route"] = d.unobservable_actions ? "time-domain Monte Carlo" : "belief-domain DP";
  return j.dump();
}

std::string cmd_contract_guarantee(const Options& o) {
  const SharingContract c = contract_from(o);
  Json j = contract_json(c);
  j["guarantee"] = num(guarantee(c, base_from(o)));
  return j.dump();
}

std::string cmd_contract_induce(const Options& o) {
  const ContractBase base = base_from(o);
  const GameParams g = induced_game(contract_from(o), base);
  Json j = params_json(g);
  const ValidationReport rep = validate(g);
  if (rep.ok() && g.n_agents >= 2) j["regime"] = std::string(to_string(classify(g).regime));
  return j.dump();
}

std::string cmd_contract_allocate(const Options& o) {
  const SharingContract c = contract_from(o);
  const ContractBase base = base_from(o);
  std::optional<std::size_t> w;
  if (o.winner) {
    if (*o.winner < 1) throw InvalidParams("--winner is 1-based");
    w = static_cast<std::size_t>(*o.winner - 1);
  }
  return allocation_json(allocate(c, base, w, o.efforts)).dump();
}

std::string cmd_contract_transfer(const Options& o) {
  const GameParams g = load_params(o);
  const Transfers t = loser_transfer(g);
  Json j;
  j["loser"] = num(t.loser);
  j["winner"] = num(t.winner);
  j["regime_after"] = std::string(to_string(classify(apply_transfers(g, t)).regime));
  return j.dump();
}

std::string cmd_hetero(const Options& o) {
  if (o.params_file.empty()) throw InvalidParams("--params FILE is required");
  const HeteroParams hp = hetero_params_from_json(read_text_file(o.params_file));
  require_valid(hp);
  const HeteroClassification cls = classify_h(hp);
  Json j;
  j["capacity"] = num(hp.capacity());
  j["p_fb"] = num(p_fb_h(hp));
  const Threshold px = p_cross_h(hp);
  j["p_cross"] = num(px.value);
  if (px.degenerate) j["p_cross_degenerate"] = true;
  std::vector<double> pi;
  for (std::size_t i = 0; i < hp.size(); ++i) pi.push_back(p_indiv_h(hp, i).value);
  j["p_indiv"] = num_list(pi);
  j["deltas"] = num_list(cls.deltas);
  j["delta_sum"] = num(cls.delta_sum);
  j["efficient"] = cls.efficient;
  Json viol = Json::array();
  for (std::size_t i : cls.violating) viol.push_back(i + 1);
  j["violating_agents"] = viol;
  Json values = Json::array();
  for (double p : o.beliefs) {
    Json row;
    row["p"] = num(p);
    row["total"] = num(v_fb_h(hp, p));
    if (cls.efficient) {
      std::vector<double> per;
      for (std::size_t i = 0; i < hp.size(); ++i) per.push_back(agent_value(hp, i, p));
      row["agents"] = num_list(per);
    }
    values.push_back(row);
  }
  j["values"] = values;
  if (!o.fix.empty()) {
    const auto [which, value] = parse_fix(o.fix);
    const ContractDesign d = design_efficient_h(hp, which, value, family_from_string(o.family));
    Json dj = contract_json(d.contract);
    dj["guarantees"] = num_list(guarantee_h(d.contract, hp));
    dj["warnings"] = strings(d.warnings);
    j["design"] = dj;
  }
  return j.dump();
}

std::string cmd_oracle(const Options& o) {
  const GameParams g = load_params(o);
  const GridSpec grid = make_grid(o);
  ValueTable table;
  Json j;
  j["mode"] = o.mode;
  if (o.mode == "first-best") {
    table = dp_first_best(g, grid);
    double gap = 0.0;
    for (std::size_t k = 0; k < table.beliefs.size(); ++k) {
      gap = std::max(gap, std::abs(table.values[k] - v_fb(g, table.beliefs[k])));
    }
    j["sup_gap_closed_form"] = num(gap);
  } else if (o.mode == "best-response") {
    require_valid_game(g);
    std::function<double(double)> rule;
    if (o.opponent_cutoff) {
      const double c = *o.opponent_cutoff;
      rule = [c](double p) { return p > c ? 1.0 : 0.0; };
    } else {
      rule = equilibrium_rule(g, o.p_t);
    }
    std::vector<double> opp = tabulate(grid, rule);
    for (double& x : opp) x *= g.n_agents - 1;
    table = dp_best_response(g, opp, grid);
  } else {
    throw InvalidParams("--mode must be first-best or best-response");
  }
  j["n_points"] = grid.n_points;
  j["dt"] = num(grid.dt);
  j["sweeps"] = table.sweeps;
  j["residual"] = num(table.residual);
  j["switch_belief"] = num(table.switch_belief());
  j["value_at_1"] = num(table.values.back());
  if (!o.out_file.empty()) write_text_file(o.out_file, table.to_csv());
  return j.dump();
}

std::string cmd_simulate(const Options& o) {
  const GameParams g = load_params(o);
  require_valid_game(g);
  std::optional<SharingContract> contract;
  ContractBase base;
  GameParams played = g;
  if (!o.contract_file.empty()) {
    contract = contract_from_json(read_text_file(o.contract_file));
    base.n_agents = g.n_agents;
    base.r_total = g.total_lump();
    base.pi_total = g.total_flow();
    base.discount = g.discount;
    base.lambda = g.lambda;
    base.pi_s = g.pi_s;
    played = induced_game(*contract, base);
  }
  const std::size_t n = static_cast<std::size_t>(g.n_agents);
  SimConfig cfg;
  cfg.p0 = o.p0;
  cfg.dt = o.dt;
  cfg.t_max = o.t_max;
  cfg.reps = o.reps;
  cfg.seed = o.seed;
  cfg.keep_outcomes = o.per_rep;
  if (o.state == "good") cfg.good_state = true;
  else if (o.state == "bad") cfg.good_state = false;
  else if (!o.state.empty()) throw InvalidParams("--state must be good or bad");
  require_belief(o.p0, "p0");

  StrategyProfile profile;
  std::optional<double> analytic;
  if (o.profile == "equilibrium") {
    profile = StrategyProfile::symmetric(n, equilibrium_rule(played, o.p_t));
    const ThresholdSet th = classify(played);
    analytic = equilibrium_value(played, o.p0,
                                 th.regime == Regime::Overcompetitive
                                     ? std::optional<double>(o.p_t.value_or(th.p_indiv))
                                     : std::nullopt);
  } else if (o.profile == "first-best") {
    profile = StrategyProfile::cutoff(n, p_fb(played));
  } else if (o.profile == "cutoff") {
    if (!o.p_t) throw InvalidParams("--profile cutoff needs --p-t");
    profile = StrategyProfile::cutoff(n, *o.p_t);
  } else if (o.profile == "time-cutoff") {
    const double stop = o.t_stop ? *o.t_stop : (o.p0 > 0.0 && o.p0 < 1.0 ? t_fb(played, o.p0) : o.p0 == 1.0 ? o.t_max : 0.0);
    profile = StrategyProfile::time_cutoff(n, stop);
  } else {
    throw InvalidParams("--profile must be equilibrium, first-best, cutoff or time-cutoff");
  }
  const PayoffStats s = contract ? simulate_with_contract(base, *contract, profile, cfg)
                                 : simulate(g, profile, cfg);
  Json j;
  j["p0"] = num(cfg.p0);
  j["reps"] = s.reps;
  j["seed"] = cfg.seed;
  j["dt"] = num(cfg.dt);
  j["t_max"] = num(cfg.t_max);
  j["mean"] = num_list(s.mean);
  j["std_error"] = num_list(s.std_error);
  j["breakthrough_frequency"] = num(s.breakthrough_frequency);
  j["mean_tau"] = num(s.mean_tau);
  if (analytic) j["analytic_value"] = num(*analytic);
  if (o.per_rep) {
    if (o.out_file.empty()) throw InvalidParams("--per-rep needs --out FILE");
    write_text_file(o.out_file, outcomes_to_csv(s));
  }
  return j.dump();
}

std::string cmd_curves(const Options& o) {
  const GameParams g = load_params(o);
  const ThresholdSet th = classify(g);
  const std::vector<double> ps = uniform_points(o.points, o.lo, o.hi);
  std::vector<std::string> header{"p"};
  std::vector<std::vector<double>> rows;
  if (o.kind == "level") {
    for (int k = 0; k < g.n_agents; ++k) header.push_back("level_" + std::to_string(k));
    for (double p : ps) {
      std::vector<double> row{p};
      for (int k = 0; k < g.n_agents; ++k) row.push_back(level_curve(g, p, k));
      rows.push_back(std::move(row));
    }
  } else if (o.kind == "undercomp") {
    const UndercompEq eq = solve_undercompetitive(g);
    header.insert(header.end(), {"value", "effort", "level_full", "first_best"});
    for (double p : ps) {
      rows.push_back({p, eq.value(p), eq.effort(p), level_curve(g, p, g.n_agents - 1), v_fb(g, p)});
    }
  } else if (o.kind == "overcomp") {
    const BeliefInterval fam = overcomp_family(g);
    constexpr int kCutoffs = 5;
    std::vector<OvercompEq> eqs;
    for (int c = 0; c < kCutoffs; ++c) {
      const double pt = c + 1 == kCutoffs ? fam.hi : fam.lo + (fam.hi - fam.lo) * c / (kCutoffs - 1);
      eqs.push_back(solve_overcompetitive(g, pt));
      header.push_back("value_pt_" + format_double(pt));
    }
    header.push_back("first_best");
    for (double p : ps) {
      std::vector<double> row{p};
      for (const auto& eq : eqs) row.push_back(eq.value(p));
      row.push_back(v_fb(g, p));
      rows.push_back(std::move(row));
    }
  } else if (o.kind == "equilibrium") {
    header.insert(header.end(), {"value", "effort"});
    const std::optional<double> pt =
        th.regime == Regime::Overcompetitive ? std::optional<double>(o.p_t.value_or(th.p_indiv)) : std::nullopt;
    const auto effort = equilibrium_rule(g, pt);
    for (double p : ps) rows.push_back({p, equilibrium_value(g, p, pt), effort(p)});
  } else if (o.kind == "first-best") {
    const FirstBest fb(g);
    header.insert(header.end(), {"value", "policy"});
    for (double p : ps) rows.push_back({p, fb.value(p), fb.policy(p)});
  } else {
    throw InvalidParams("--kind must be level, undercomp, overcomp, equilibrium or first-best");
  }
  return emit(o, make_csv(header, rows));
}

}  // namespace

CommandResult run(const std::vector<std::string>& args) {
  CommandResult result;
  Options o;
  CLI::App app{"Strategic experimentation: thresholds, equilibria, contracts, oracle and simulation",
               "expgame"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  const auto add_params = [&](CLI::App* c) {
    c->add_option("--params", o.params_file, "Parameter file (JSON)")->required();
  };
  const auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out_file, "Output file"); };
  const auto add_grid = [&](CLI::App* c) {
    c->add_option("--grid", o.grid, "Oracle grid points")->capture_default_str();
    c->add_option("--dt", o.dt, "Time step")->capture_default_str();
    c->add_option("--tol", o.tol, "Sup-norm convergence tolerance")->capture_default_str();
  };
  const auto add_base = [&](CLI::App* c) {
    c->add_option("--r", o.r_total, "Total lump-sum reward R")->capture_default_str();
    c->add_option("--pi", o.pi_total, "Total continuation flow Pi")->capture_default_str();
    c->add_option("--n", o.n, "Number of agents")->capture_default_str();
    c->add_option("--pi-s", o.pi_s, "Safe flow per agent")->capture_default_str();
    c->add_option("--discount", o.discount, "Discount rate r")->capture_default_str();
    c->add_option("--lambda", o.lambda, "Arrival rate")->capture_default_str();
  };
  const auto add_contract = [&](CLI::App* c) {
    c->add_option("--contract", o.contract_file, "Contract file (JSON)");
    c->add_option("--alpha-i", o.alpha_i, "Instantaneous share");
    c->add_option("--alpha-c", o.alpha_c, "Continuation share");
    c->add_option("--family", o.family, "WinnerBased or EffortBased")->capture_default_str();
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check parameter invariants");
  validate_cmd->add_option("--params", o.params_file, "Parameter file (JSON)")->required();
  auto* thresholds_cmd = app.add_subcommand("thresholds", "Threshold beliefs and regime");
  add_params(thresholds_cmd);
  auto* classify_cmd = app.add_subcommand("classify", "Efficiency classification");
  add_params(classify_cmd);
  auto* fb_cmd = app.add_subcommand("first-best", "Cooperative solution");
  add_params(fb_cmd);
  fb_cmd->add_option("--p", o.beliefs, "Beliefs at which to report the value");
  auto* eq_cmd = app.add_subcommand("equilibrium", "Symmetric Markov perfect equilibrium");
  add_params(eq_cmd);
  eq_cmd->add_option("--p", o.beliefs, "Beliefs at which to report value and effort");
  eq_cmd->add_option("--p-t", o.p_t, "Cutoff (overcompetitive regime); defaults to p_indiv");
  eq_cmd->add_option("--thresholds", o.thresholds_file, "Cross-check against a thresholds file");
  eq_cmd->add_flag("--verify", o.verify, "Check the profile with the best-response oracle");
  add_grid(eq_cmd);

  auto* contract_cmd = app.add_subcommand("contract", "Sharing contracts");
  contract_cmd->require_subcommand(1);
  auto* design_cmd = contract_cmd->add_subcommand("design", "Efficient contract for fixed share");
  add_base(design_cmd);
  design_cmd->add_option("--fix", o.fix, "alpha-i=V or alpha-c=V")->required();
  design_cmd->add_option("--family", o.family, "WinnerBased or EffortBased")->capture_default_str();
  design_cmd->add_flag("--unobservable", o.unobservable, "Actions are not observed");
  auto* guarantee_cmd = contract_cmd->add_subcommand("guarantee", "Loser guarantee of a contract");
  add_base(guarantee_cmd);
  add_contract(guarantee_cmd);
  auto* induce_cmd = contract_cmd->add_subcommand("induce", "Game induced by a contract");
  add_base(induce_cmd);
  add_contract(induce_cmd);
  auto* allocate_cmd = contract_cmd->add_subcommand("allocate", "Ex-post allocation");
  add_base(allocate_cmd);
  add_contract(allocate_cmd);
  allocate_cmd->add_option("--winner", o.winner, "Winner index (1-based)");
  allocate_cmd->add_option("--efforts", o.efforts, "Terminal efforts");
  auto* transfer_cmd = contract_cmd->add_subcommand("transfer", "Knife-edge loser transfer");
  add_params(transfer_cmd);

  auto* hetero_cmd = app.add_subcommand("hetero", "Heterogeneous capacities");
  add_params(hetero_cmd);
  hetero_cmd->add_option("--p", o.beliefs, "Beliefs at which to report values");
  hetero_cmd->add_option("--fix", o.fix, "Design an efficient contract: alpha-i=V or alpha-c=V");
  hetero_cmd->add_option("--family", o.family, "WinnerBased or EffortBased")->capture_default_str();

  auto* oracle_cmd = app.add_subcommand("oracle", "Dynamic-programming oracle");
  add_params(oracle_cmd);
  add_grid(oracle_cmd);
  add_out(oracle_cmd);
  oracle_cmd->add_option("--mode", o.mode, "first-best or best-response")->capture_default_str();
  oracle_cmd->add_option("--opponent-cutoff", o.opponent_cutoff, "Opponents play this cutoff");
  oracle_cmd->add_option("--p-t", o.p_t, "Equilibrium cutoff used for opponents");

  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo simulation");
  add_params(sim_cmd);
  add_out(sim_cmd);
  sim_cmd->add_option("--p0", o.p0, "Prior belief")->capture_default_str();
  sim_cmd->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  sim_cmd->add_option("--reps", o.reps, "Replications")->capture_default_str();
  sim_cmd->add_option("--dt", o.dt, "Time step")->capture_default_str();
  sim_cmd->add_option("--t-max", o.t_max, "Horizon cap")->capture_default_str();
  sim_cmd->add_option("--profile", o.profile, "equilibrium, first-best, cutoff or time-cutoff")
      ->capture_default_str();
  sim_cmd->add_option("--p-t", o.p_t, "Cutoff belief");
  sim_cmd->add_option("--t-stop", o.t_stop, "Stopping time for time-cutoff (default t_FB)");
  sim_cmd->add_option("--state", o.state, "Force the state: good or bad");
  sim_cmd->add_option("--contract", o.contract_file, "Contract file (JSON)");
  sim_cmd->add_flag("--per-rep", o.per_rep, "Write per-replication CSV to --out");

  auto* curves_cmd = app.add_subcommand("curves", "CSV curves");
  add_params(curves_cmd);
  add_out(curves_cmd);
  curves_cmd->add_option("--kind", o.kind, "level, undercomp, overcomp, equilibrium, first-best")
      ->capture_default_str();
  curves_cmd->add_option("--points", o.points, "Number of beliefs")->capture_default_str();
  curves_cmd->add_option("--lo", o.lo, "Smallest belief")->capture_default_str();
  curves_cmd->add_option("--hi", o.hi, "Largest belief")->capture_default_str();
  curves_cmd->add_option("--p-t", o.p_t, "Cutoff for the equilibrium curve");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream os;
    app.exit(e, os, os);
    result.out = os.str();
    return result;
  } catch (const CLI::CallForAllHelp& e) {
    std::ostringstream os;
    app.exit(e, os, os);
    result.out = os.str();
    return result;
  } catch (const CLI::ParseError& e) {
    std::ostringstream out;
    std::ostringstream err;
    app.exit(e, out, err);
    result.err = err.str() + out.str() + app.help();
    result.exit_code = kUsage;
    return result;
  }

  int code = kOk;
  try {
    std::string payload;
    if (*validate_cmd) payload = cmd_validate(o, code);
    else if (*thresholds_cmd) payload = cmd_thresholds(o);
    else if (*classify_cmd) payload = cmd_classify(o);
    else if (*fb_cmd) payload = cmd_first_best(o);
    else if (*eq_cmd) payload = cmd_equilibrium(o);
    else if (*design_cmd) payload = cmd_contract_design(o);
    else if (*guarantee_cmd) payload = cmd_contract_guarantee(o);
    else if (*induce_cmd) payload = cmd_contract_induce(o);
    else if (*allocate_cmd) payload = cmd_contract_allocate(o);
    else if (*transfer_cmd) payload = cmd_contract_transfer(o);
    else if (*hetero_cmd) payload = cmd_hetero(o);
    else if (*oracle_cmd) payload = cmd_oracle(o);
    else if (*sim_cmd) payload = cmd_simulate(o);
    else if (*curves_cmd) payload = cmd_curves(o);
    result.out = payload;
    if (!result.out.empty() && result.out.back() != '\n') result.out += '\n';
    result.exit_code = code;
  } catch (const InvalidParams& e) {
    result.err = std::string("error: ") + e.what() + "\n";
    result.exit_code = kInvalidParams;
  } catch (const NumericalError& e) {
    result.err = std::string("error: ") + e.what() + "\n";
    result.exit_code = kNonConvergence;
  } catch (const PreconditionError& e) {
    result.err = std::string("error: ") + e.what() + "\n";
    result.exit_code = kPrecondition;
  } catch (const std::exception& e) {
    result.err = std::string("error: ") + e.what() + "\n";
    result.exit_code = kUsage;
  }
  return result;
}

}  // namespace expgame::cli
