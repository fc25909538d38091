#include <cmath>

#include "doctest.h"
#include "expgame/equilibrium.hpp"
#include "expgame/errors.hpp"
#include "expgame/hetero.hpp"
#include "expgame/planner.hpp"
#include "fixtures.hpp"
#include "numerics.hpp"

using namespace expgame;
using doctest::Approx;

namespace {

GameParams random_game(ref::Draw& d) {
  while (true) {
    GameParams g;
    g.n_agents = d.integer(2, 6);
    g.lambda = d.uniform(0.2, 3.0);
    g.discount = d.uniform(0.2, 3.0);
    g.pi_s = d.uniform(0.1, 2.0);
    g.r_w = d.uniform(0.0, 3.0);
    g.r_l = d.uniform(-1.0, 2.0);
    g.pi_l = d.uniform(-1.0, 3.0);
    g.pi_w = g.pi_l + d.uniform(0.0, 6.0);
    if (validate(g).ok() && g.pi_w > g.pi_s) return g;
  }
}

}  // namespace

TEST_CASE("fixture thresholds") {
  const HeteroParams hp = fixtures::het();
  CHECK(hp.capacity() == 3.0);
  CHECK(hp.pi_w(0) == 4.0);
  CHECK(hp.pi_w(1) == 5.0);
  CHECK(std::abs(p_fb_h(hp) - 1.0 / 3.0) <= 1e-12);
  CHECK(std::abs(p_cross_h(hp).value - 1.0 / 3.0) <= 1e-12);
  CHECK(std::abs(p_indiv_h(hp, 0).value - 1.0 / 3.0) <= 1e-12);
  CHECK(std::abs(p_indiv_h(hp, 1).value - 1.0 / 3.0) <= 1e-12);
  CHECK(delta(hp) == std::vector<double>{0.0, 0.0});
  CHECK(classify_h(hp).efficient);
  HeteroParams free = hp;
  free.pi_s = 0.0;
  CHECK(p_fb_h(free) == 0.0);
}

TEST_CASE("delta examples and degenerate crossing") {
  HeteroParams hp = fixtures::het();
  hp.mu = {1.0, 1.0};
  hp.pi_l = {2.0, 2.0};
  hp.pi_total = 6.0;
  CHECK(delta(hp) == std::vector<double>{-1.0, -1.0});
  hp.pi_total = 4.0 + 0.0;  // Pi - M pi_s = 2
  hp.pi_l = {2.0, 2.0};
  hp.pi_total = 4.0;
  // pi_w = 4 - 2 = 2 > mu pi_s = 1 keeps the parameters valid
  CHECK(validate(hp).ok());
  const Threshold px = p_cross_h(hp);
  CHECK(std::isinf(px.value));
  CHECK(px.degenerate);
  HeteroParams t = fixtures::het();
  t.mu = {1.0, 1.0};
  t.pi_l = {0.0, 0.0};
  t.r_l = {1.0, 1.0};
  t.r_total = 2.0;
  t.pi_total = 4.0;
  CHECK(delta(t) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("per-agent violations are not hidden by the aggregate") {
  HeteroParams hp = fixtures::het();
  hp.pi_l = {0.5, 2.5};  // deltas (0.5, -0.5)
  const HeteroClassification c = classify_h(hp);
  CHECK_FALSE(c.efficient);
  CHECK(c.violating.size() == 2);
  CHECK(c.delta_sum == Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(agent_value(hp, 0, 0.5), PreconditionError);
}

TEST_CASE("first-best values") {
  const HeteroParams hp = fixtures::het();
  CHECK(v_fb_h(hp, 1.0) == Approx(4.5).epsilon(1e-15));
  CHECK(agent_value(hp, 0, 1.0) == Approx(1.5).epsilon(1e-15));
  CHECK(v_fb_h(hp, 0.2) == 3.0);
  CHECK(agent_value(hp, 0, 0.2) == 1.0);
  CHECK(v_fb_h(hp, 1.0 / 3.0) == Approx(3.0).epsilon(1e-14));
  for (double p : {0.0, 0.2, 0.4, 0.7, 1.0}) {
    CHECK(agent_value(hp, 0, p) + agent_value(hp, 1, p) == v_fb_h(hp, p));
    CHECK(agent_value(hp, 0, p) / hp.mu[0] == Approx(agent_value(hp, 1, p) / hp.mu[1]).epsilon(1e-15));
  }
}

TEST_CASE("agent value solves its own full-effort ODE") {
  // u_i + (M lambda/r) p u_i + (M lambda/r) p (1-p) u_i' = p lambda mu_i (R + Pi/r)
  const HeteroParams hp = fixtures::het();
  const double a = hp.capacity() * hp.lambda / hp.discount;
  for (std::size_t i : {0u, 1u}) {
    const auto u = [&](double p) { return agent_value(hp, i, p); };
    for (double p : {0.45, 0.6, 0.9}) {
      const double lhs = u(p) + a * p * u(p) + a * p * (1 - p) * ref::central_diff(u, p);
      CHECK(lhs == Approx(p * hp.lambda * hp.mu[i] * (hp.r_total + hp.pi_total / hp.discount)).epsilon(1e-8));
    }
  }
}

TEST_CASE("contracts with capacities") {
  const HeteroParams hp = fixtures::het();
  const ContractDesign d = design_efficient_h(hp, FixedShare::AlphaI, 1.0);
  CHECK(d.contract.alpha_c == 0.5);
  const SharingContract wta{ContractFamily::WinnerBased, 1.0, 1.0};
  CHECK(normalized_guarantee(wta, hp) == 0.0);
  CHECK(guarantee_h(wta, hp) == std::vector<double>{0.0, 0.0});
  const HeteroParams induced = induced_hetero_game(d.contract, hp);
  CHECK(classify_h(induced).efficient);
  CHECK_THROWS_AS(design_efficient_h(hp, FixedShare::AlphaC, 0.5), DesignError);
  const Allocation a = allocate_h(d.contract, hp, std::size_t{1});
  CHECK(a.continuation[0] == Approx(1.0).epsilon(1e-15));
  CHECK(a.continuation[1] == Approx(5.0).epsilon(1e-15));
  const std::vector<double> k{1.0, 2.0};
  const Allocation e = allocate_h({ContractFamily::EffortBased, 1.0, 0.5}, hp, k);
  CHECK(e.continuation[0] == Approx(2.0).epsilon(1e-15));
  CHECK(e.continuation[1] == Approx(4.0).epsilon(1e-15));
}

TEST_CASE("validation") {
  HeteroParams hp = fixtures::het();
  hp.mu = {1.0};
  CHECK_FALSE(validate(hp).ok());
  hp = fixtures::het();
  hp.pi_total = 3.0;
  CHECK_FALSE(validate(hp).ok());
  hp = fixtures::het();
  hp.pi_l = {1.0, 5.5};  // pi_w(1) = 6 - 1 = 5 fine, pi_w(0) = 6 - 5.5 = 0.5 < mu_0 pi_s
  CHECK_FALSE(validate(hp).ok());
  hp = fixtures::het();
  hp.mu = {1.0, -2.0};
  CHECK_FALSE(validate(hp).ok());
}

TEST_CASE("homogeneous reduction") {
  ref::Draw d(53);
  for (int i = 0; i < 1000; ++i) {
    const GameParams g = random_game(d);
    const HeteroParams hp = from_game(g);
    const double n = g.n_agents;
    CHECK(std::abs(p_fb_h(hp) - p_fb(g)) <= 1e-12);
    const Threshold a = p_cross_h(hp);
    const Threshold b = p_cross(g);
    if (std::isfinite(b.value) && std::isfinite(a.value)) CHECK(std::abs(a.value - b.value) <= 1e-12 * std::max(1.0, b.value));
    const Threshold ia = p_indiv_h(hp, 0);
    const Threshold ib = p_indiv(g);
    CHECK(ia.degenerate == ib.degenerate);
    if (!ib.degenerate) CHECK(std::abs(ia.value - ib.value) <= 1e-12 * std::max(1.0, ib.value));
    const double s = efficiency_gap(g);
    CHECK(std::abs(delta(hp)[0] - s) <= 1e-12);
    CHECK(classify_h(hp).efficient == (classify(g).regime == Regime::Efficient));
    const double p = d.uniform(0.0, 1.0);
    CHECK(std::abs(v_fb_h(hp, p) / n - v_fb(g, p)) <= 1e-12 * std::max(1.0, v_fb(g, p)));
    ContractBase cb;
    cb.n_agents = g.n_agents;
    cb.r_total = g.total_lump();
    cb.pi_total = g.total_flow();
    cb.discount = g.discount;
    cb.lambda = g.lambda;
    cb.pi_s = g.pi_s;
    const SharingContract c{ContractFamily::WinnerBased, d.uniform(-0.5, 1.5), d.uniform(-0.5, 1.5)};
    CHECK(std::abs(normalized_guarantee(c, hp) - guarantee(c, cb)) <= 1e-12 * std::max(1.0, std::abs(guarantee(c, cb))));
  }
}

TEST_CASE("efficient classification implies coinciding thresholds") {
  ref::Draw d(59);
  int efficient = 0;
  for (int i = 0; i < 10000; ++i) {
    HeteroParams hp;
    const int n = d.integer(2, 5);
    hp.lambda = d.uniform(0.2, 3.0);
    hp.discount = d.uniform(0.2, 3.0);
    hp.pi_s = d.uniform(0.1, 2.0);
    hp.r_total = d.uniform(0.0, 3.0);
    for (int j = 0; j < n; ++j) {
      hp.mu.push_back(d.uniform(0.2, 3.0));
      hp.r_l.push_back(d.uniform(-0.5, 0.5));
      hp.pi_l.push_back(0.0);
    }
    const bool knife = i % 2 == 0;
    for (int j = 0; j < n; ++j) {
      hp.pi_l[j] = knife ? hp.mu[j] * hp.pi_s - hp.discount * hp.r_l[j] : d.uniform(-1.0, 3.0);
    }
    double sum_l = 0.0;
    for (double x : hp.pi_l) sum_l += x;
    hp.pi_total = sum_l + hp.capacity() * hp.pi_s + d.uniform(0.5, 5.0);
    if (!validate(hp).ok()) continue;
    const HeteroClassification c = classify_h(hp);
    bool big = false;
    for (double x : c.deltas) big = big || std::abs(x) > 1e-9;
    if (big) CHECK_FALSE(c.efficient);
    if (c.efficient) {
      ++efficient;
      const double pfb = p_fb_h(hp);
      CHECK(std::abs(p_cross_h(hp).value - pfb) <= 1e-12);
      for (std::size_t j = 0; j < hp.size(); ++j) CHECK(std::abs(p_indiv_h(hp, j).value - pfb) <= 1e-12);
    }
  }
  CHECK(efficient > 1000);
}
