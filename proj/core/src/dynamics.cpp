#include "expgame/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "expgame/errors.hpp"
#include "expgame/planner.hpp"

namespace expgame {

double odds_ratio(double p) {
  require_interior_belief(p, "odds_ratio argument");
  return (1.0 - p) / p;
}

double belief_path(double p0, double total_effort, double lambda, double t) {
  require_belief(p0, "initial belief");
  if (!(total_effort >= 0.0)) throw DomainError("total effort must be >= 0");
  if (!(t >= 0.0)) throw DomainError("elapsed time must be >= 0");
  if (p0 == 0.0 || p0 == 1.0 || total_effort * t == 0.0) return p0;
  const double decay = std::exp(-total_effort * lambda * t);
  return decay / (odds_ratio(p0) + decay);
}

double t_fb(const GameParams& params, double p0) {
  require_valid(params);
  require_interior_belief(p0, "initial belief");
  const double threshold = p_fb(params);
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw DomainError("first-best threshold lies outside (0,1); t_FB undefined");
  }
  if (p0 <= threshold) return 0.0;
  const double t = std::log(odds_ratio(threshold) / odds_ratio(p0)) /
                   (params.n_agents * params.lambda);
  return t > 0.0 ? t : 0.0;
}

void EffortPath::append(double t_start, std::vector<double> efforts) {
  if (efforts.size() != n_agents_) {
    throw PreconditionError("effort piece has the wrong number of agents");
  }
  if (pieces_.empty() ? t_start != 0.0 : !(t_start > pieces_.back().t_start)) {
    throw PreconditionError("effort pieces must start at 0 and be strictly increasing");
  }
  for (double k : efforts) {
    if (!(k >= 0.0 && k <= 1.0)) throw PreconditionError("efforts must lie in [0,1]");
  }
  pieces_.push_back({t_start, std::move(efforts)});
}

double EffortPath::effort(std::size_t agent, double t) const {
  double k = 0.0;
  for (const auto& piece : pieces_) {
    if (piece.t_start > t) break;
    k = piece.efforts.at(agent);
  }
  return k;
}

EffortPath EffortPath::constant(std::size_t n_agents, double effort) {
  EffortPath path(n_agents);
  path.append(0.0, std::vector<double>(n_agents, effort));
  return path;
}

std::string EffortPath::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "t_start";
  for (std::size_t i = 0; i < n_agents_; ++i) out << ",k_" << (i + 1);
  out << '\n';
  for (const auto& piece : pieces_) {
    out << piece.t_start;
    for (double k : piece.efforts) out << ',' << k;
    out << '\n';
  }
  return out.str();
}

EffortPath EffortPath::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("t_start", 0) != 0) {
    throw PreconditionError("effort path CSV must start with a t_start header");
  }
  std::size_t n = 0;
  for (char c : line) n += (c == ',');
  EffortPath path(n);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    if (values.size() != n + 1) throw PreconditionError("effort path CSV row has wrong width");
    path.append(values[0], std::vector<double>(values.begin() + 1, values.end()));
  }
  return path;
}

double realized_payoff(Role role, double tau, const EffortPath& path, const GameParams& params,
                       std::size_t agent) {
  const bool never = std::isinf(tau);
  if (!(tau >= 0.0)) throw PreconditionError("breakthrough time must be >= 0");
  if (role == Role::NoBreakthrough && !never) {
    throw PreconditionError("no-breakthrough payoff requires tau = +inf");
  }
  if (role != Role::NoBreakthrough && !path.empty() && agent >= path.n_agents()) {
    throw PreconditionError("agent index out of range");
  }
  const double r = params.discount;

  // Safe-arm flow integrated piece by piece: pi_s (1-k) (e^{-ra} - e^{-rb}).
  double total = 0.0;
  const auto& pieces = path.pieces();
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    const double a = pieces[j].t_start;
    if (a >= tau) break;
    const double b = (j + 1 < pieces.size()) ? std::min(pieces[j + 1].t_start, tau) : tau;
    const double k = pieces[j].efforts.at(agent);
    const double tail = std::isinf(b) ? 0.0 : std::exp(-r * b);
    total += params.pi_s * (1.0 - k) * (std::exp(-r * a) - tail);
  }
  // An empty path means no effort at all.
  if (pieces.empty()) {
    total += params.pi_s * (1.0 - (never ? 0.0 : std::exp(-r * tau)));
  }

  if (never) return total;
  const double discount_factor = std::exp(-r * tau);
  if (role == Role::Winner) return total + discount_factor * (r * params.r_w + params.pi_w);
  return total + discount_factor * (r * params.r_l + params.pi_l);
}

}  // namespace expgame
