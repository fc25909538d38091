#include "expgame/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <thread>

#include "expgame/errors.hpp"

namespace expgame {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent stream per replication, reproducible from (seed, rep) alone.
class ReplicationRng {
 public:
  ReplicationRng(std::uint64_t seed, std::uint64_t rep) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
    engine_.seed(seq);
  }
  // Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// Deterministic no-breakthrough history: the belief only moves when effort is
// exerted, so it is shared by every replication.
struct Trajectory {
  std::size_t n = 0;
  std::vector<double> t0;
  std::vector<double> hazard0;  // lambda * integral of K up to t0
  std::vector<double> total;    // K on the step
  std::vector<double> efforts;  // step-major, n per step
  std::vector<double> safe0;    // step-major, discounted safe payoff up to t0
  double t_end = 0.0;
  double hazard_end = 0.0;
  std::vector<double> safe_end;
};

Trajectory build_trajectory(const StrategyProfile& profile, double lambda, double r, double pi_s,
                            const SimConfig& cfg) {
  const std::size_t n = profile.n_agents();
  Trajectory tr;
  tr.n = n;
  std::vector<double> e(n);
  std::vector<double> safe(n, 0.0);
  double t = 0.0;
  double p = cfg.p0;
  double hazard = 0.0;
  const auto& pieces = profile.path().pieces();
  while (t < cfg.t_max) {
    double h = std::min(cfg.dt, cfg.t_max - t);
    bool last_piece = true;
    if (profile.is_belief_indexed()) {
      std::fill(e.begin(), e.end(), 0.0);
      profile.rule()(p, e);
    } else {
      for (std::size_t i = 0; i < n; ++i) e[i] = profile.path().effort(i, t);
      const auto next = std::upper_bound(pieces.begin(), pieces.end(), t,
                                         [](double x, const EffortPiece& piece) { return x < piece.t_start; });
      if (next != pieces.end()) {
        last_piece = false;
        h = std::min(h, next->t_start - t);
      }
    }
    double k_total = 0.0;
    for (double k : e) {
      if (!(k >= 0.0 && k <= 1.0)) throw PreconditionError("profile efforts must lie in [0,1]");
      k_total += k;
    }
    if (k_total == 0.0 && (profile.is_belief_indexed() || last_piece)) break;  // absorbed

    tr.t0.push_back(t);
    tr.hazard0.push_back(hazard);
    tr.total.push_back(k_total);
    tr.efforts.insert(tr.efforts.end(), e.begin(), e.end());
    tr.safe0.insert(tr.safe0.end(), safe.begin(), safe.end());

    const double t1 = t + h;
    const double d0 = std::exp(-r * t);
    const double d1 = std::exp(-r * t1);
    for (std::size_t i = 0; i < n; ++i) safe[i] += pi_s * (1.0 - e[i]) * (d0 - d1);
    hazard += lambda * k_total * h;
    p = belief_path(p, k_total, lambda, h);
    t = t1;
  }
  tr.t_end = t;
  tr.hazard_end = hazard;
  tr.safe_end = safe;
  return tr;
}

// Flow-equivalent terminal value (r R_i + pi_i) per agent given the winner and
// the efforts at the breakthrough.
using TerminalRule =
    std::function<void(std::size_t winner, std::span<const double> efforts, std::span<double> out)>;

PayoffStats run(int n_agents, double lambda, double r, double pi_s, const StrategyProfile& profile,
                const SimConfig& cfg, const TerminalRule& terminal) {
  validate_sim(cfg, n_agents, lambda);
  const std::size_t n = static_cast<std::size_t>(n_agents);
  if (profile.n_agents() != n) throw PreconditionError("profile and game disagree on the number of agents");
  const Trajectory tr = build_trajectory(profile, lambda, r, pi_s, cfg);

  const std::size_t reps = static_cast<std::size_t>(cfg.reps);
  std::vector<double> payoff(reps * n);
  std::vector<double> tau(reps, kInf);
  std::vector<long> winner(reps, -1);
  std::vector<long> step_of(reps, -1);

  const auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<double> term(n);
    for (std::size_t rep = begin; rep < end; ++rep) {
      ReplicationRng rng(cfg.seed, rep);
      const double u_state = rng.uniform();
      const double u_time = rng.uniform();
      const double u_winner = rng.uniform();
      const bool good = cfg.good_state ? *cfg.good_state : u_state < cfg.p0;
      double* out = &payoff[rep * n];
      const double e_arrival = -std::log1p(-u_time);
      if (good && e_arrival < tr.hazard_end) {
        const auto it = std::upper_bound(tr.hazard0.begin(), tr.hazard0.end(), e_arrival);
        const std::size_t j = static_cast<std::size_t>(it - tr.hazard0.begin()) - 1;
        const double k_total = tr.total[j];
        const double t_next = j + 1 < tr.t0.size() ? tr.t0[j + 1] : tr.t_end;
        const double t_hit =
            std::min(tr.t0[j] + (e_arrival - tr.hazard0[j]) / (lambda * k_total), t_next);
        const double* e = &tr.efforts[j * n];
        double pick = u_winner * k_total;
        std::size_t w = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
          if (e[i] > 0.0 && pick < e[i]) {
            w = i;
            break;
          }
          pick -= e[i];
        }
        while (e[w] == 0.0) --w;  // rounding fallback: last agent with effort
        terminal(w, std::span<const double>(e, n), term);
        const double d0 = std::exp(-r * tr.t0[j]);
        const double dt_hit = std::exp(-r * t_hit);
        for (std::size_t i = 0; i < n; ++i) {
          out[i] = tr.safe0[j * n + i] + pi_s * (1.0 - e[i]) * (d0 - dt_hit) + dt_hit * term[i];
        }
        tau[rep] = t_hit;
        winner[rep] = static_cast<long>(w);
        step_of[rep] = static_cast<long>(j);
      } else {
        const double tail = std::exp(-r * tr.t_end) * pi_s;
        for (std::size_t i = 0; i < n; ++i) out[i] = tr.safe_end[i] + tail;
      }
    }
  };

  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, (reps + 1023) / 1024));
  if (threads <= 1) {
    work(0, reps);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (reps + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t b = std::min(reps, w * chunk);
      const std::size_t e = std::min(reps, b + chunk);
      pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }

  // Sequential reduction keeps the statistics independent of the thread count.
  PayoffStats stats;
  stats.reps = cfg.reps;
  stats.mean.assign(n, 0.0);
  stats.std_error.assign(n, 0.0);
  for (std::size_t rep = 0; rep < reps; ++rep) {
    for (std::size_t i = 0; i < n; ++i) stats.mean[i] += payoff[rep * n + i];
  }
  for (double& m : stats.mean) m /= static_cast<double>(reps);
  for (std::size_t i = 0; i < n; ++i) {
    double ss = 0.0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const double d = payoff[rep * n + i] - stats.mean[i];
      ss += d * d;
    }
    const double var = reps > 1 ? ss / static_cast<double>(reps - 1) : 0.0;
    stats.std_error[i] = std::sqrt(var / static_cast<double>(reps));
  }
  double tau_sum = 0.0;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    if (winner[rep] >= 0) {
      ++stats.breakthroughs;
      tau_sum += tau[rep];
    }
  }
  stats.breakthrough_frequency = static_cast<double>(stats.breakthroughs) / static_cast<double>(reps);
  stats.mean_tau = stats.breakthroughs > 0 ? tau_sum / static_cast<double>(stats.breakthroughs)
                                           : std::numeric_limits<double>::quiet_NaN();
  if (cfg.keep_outcomes) {
    stats.outcomes.resize(reps);
    for (std::size_t rep = 0; rep < reps; ++rep) {
      Outcome& o = stats.outcomes[rep];
      o.tau = tau[rep];
      if (winner[rep] >= 0) {
        o.winner = static_cast<std::size_t>(winner[rep]);
        const auto j = static_cast<std::size_t>(step_of[rep]);
        o.terminal_efforts.assign(tr.efforts.begin() + j * n, tr.efforts.begin() + (j + 1) * n);
      }
      o.discounted_payoffs.assign(payoff.begin() + rep * n, payoff.begin() + (rep + 1) * n);
    }
  }
  return stats;
}

}  // namespace

void validate_sim(const SimConfig& cfg, int n_agents, double lambda) {
  if (!(cfg.p0 >= 0.0 && cfg.p0 <= 1.0)) throw PreconditionError("p0 must lie in [0,1]");
  if (!(cfg.dt > 0.0 && cfg.dt <= 0.05 / (n_agents * lambda))) {
    throw PreconditionError("simulation step must lie in (0, 0.05/(N lambda)]");
  }
  if (!(cfg.t_max > 0.0) || !std::isfinite(cfg.t_max)) {
    throw PreconditionError("t_max must be finite and positive");
  }
  if (cfg.reps < 1) throw PreconditionError("reps must be at least 1");
}

StrategyProfile StrategyProfile::belief_indexed(std::size_t n_agents, BeliefRule rule) {
  if (!rule) throw PreconditionError("belief rule must be callable");
  StrategyProfile s;
  s.n_agents_ = n_agents;
  s.rule_ = std::move(rule);
  return s;
}

StrategyProfile StrategyProfile::symmetric(std::size_t n_agents, std::function<double(double)> effort) {
  return belief_indexed(n_agents, [effort = std::move(effort)](double p, std::span<double> e) {
    std::fill(e.begin(), e.end(), effort(p));
  });
}

StrategyProfile StrategyProfile::cutoff(std::size_t n_agents, double p_t) {
  return symmetric(n_agents, [p_t](double p) { return p > p_t ? 1.0 : 0.0; });
}

StrategyProfile StrategyProfile::time_indexed(EffortPath path) {
  if (path.empty()) throw PreconditionError("time-indexed profile needs a nonempty path");
  StrategyProfile s;
  s.n_agents_ = path.n_agents();
  s.path_ = std::move(path);
  return s;
}

StrategyProfile StrategyProfile::time_cutoff(std::size_t n_agents, double t_stop) {
  EffortPath path(n_agents);
  if (t_stop > 0.0) {
    path.append(0.0, std::vector<double>(n_agents, 1.0));
    if (std::isfinite(t_stop)) path.append(t_stop, std::vector<double>(n_agents, 0.0));
  } else {
    path.append(0.0, std::vector<double>(n_agents, 0.0));
  }
  return time_indexed(std::move(path));
}

PayoffStats simulate(const GameParams& params, const StrategyProfile& profile, const SimConfig& cfg) {
  require_valid(params);
  const double win = params.discount * params.r_w + params.pi_w;
  const double lose = params.discount * params.r_l + params.pi_l;
  return run(params.n_agents, params.lambda, params.discount, params.pi_s, profile, cfg,
             [win, lose](std::size_t w, std::span<const double>, std::span<double> out) {
               std::fill(out.begin(), out.end(), lose);
               out[w] = win;
             });
}

PayoffStats simulate_with_contract(const ContractBase& base, const SharingContract& contract,
                                   const StrategyProfile& profile, const SimConfig& cfg) {
  require_valid(base);
  if (contract.family == ContractFamily::WinnerBased) {
    return simulate(induced_game(contract, base), profile, cfg);
  }
  const double r = base.discount;
  return run(base.n_agents, base.lambda, r, base.pi_s, profile, cfg,
             [&](std::size_t, std::span<const double> efforts, std::span<double> out) {
               const Allocation a = allocate(contract, base, efforts);
               for (std::size_t i = 0; i < out.size(); ++i) {
                 out[i] = r * a.instantaneous[i] + a.continuation[i];
               }
             });
}

std::string outcomes_to_csv(const PayoffStats& stats) {
  std::string s = "rep,tau,winner";
  const std::size_t n = stats.mean.size();
  for (std::size_t i = 0; i < n; ++i) s += ",payoff_" + std::to_string(i + 1);
  s += '\n';
  char buf[64];
  for (std::size_t rep = 0; rep < stats.outcomes.size(); ++rep) {
    const Outcome& o = stats.outcomes[rep];
    s += std::to_string(rep);
    std::snprintf(buf, sizeof buf, ",%.17g,", o.tau);
    s += buf;
    if (o.winner) s += std::to_string(*o.winner + 1);
    for (double v : o.discounted_payoffs) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      s += buf;
    }
    s += '\n';
  }
  return s;
}

}  // namespace expgame
