#include "expgame/params.hpp"

#include <cmath>
#include <sstream>

#include "expgame/errors.hpp"

namespace expgame {
namespace {

std::string join(const std::vector<std::string>& items) {
  std::ostringstream out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i != 0) out << "; ";
    out << items[i];
  }
  return out.str();
}

}  // namespace

ValidationReport validate(const GameParams& params) {
  ValidationReport report;
  auto& errors = report.errors;

  const double fields[] = {params.lambda, params.discount, params.pi_s, params.r_w,
                           params.r_l,    params.pi_w,     params.pi_l};
  for (double v : fields) {
    if (!std::isfinite(v)) {
      errors.emplace_back("non-finite parameter value");
      return report;
    }
  }

  if (params.n_agents < 1) errors.emplace_back("n_agents must be >= 1");
  if (!(params.lambda > 0.0)) errors.emplace_back("lambda must be > 0");
  if (!(params.discount > 0.0)) errors.emplace_back("discount must be > 0");
  if (!(params.pi_s >= 0.0)) errors.emplace_back("pi_s must be >= 0");
  if (params.n_agents >= 1 && !(params.total_flow() > params.n_agents * params.pi_s)) {
    errors.emplace_back("Pi <= N*pi_s: a breakthrough must improve total continuation value");
  }

  if (params.pi_w < params.pi_l) {
    report.warnings.emplace_back("pi_w < pi_l: winning pays less continuation flow than losing");
  }
  if (params.n_agents == 1) {
    report.warnings.emplace_back("N = 1: single-agent problem, equilibrium operations unavailable");
  }
  return report;
}

void require_valid(const GameParams& params) {
  const auto report = validate(params);
  if (!report.ok()) throw InvalidParams("invalid game parameters: " + join(report.errors));
}

void require_valid_game(const GameParams& params) {
  require_valid(params);
  if (params.n_agents < 2) {
    throw PreconditionError("equilibrium operations require n_agents >= 2");
  }
}

void require_belief(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0,1]");
  }
}

void require_interior_belief(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(std::string(what) + " must lie in the open interval (0,1)");
  }
}

}  // namespace expgame
