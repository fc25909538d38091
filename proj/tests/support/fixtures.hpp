#pragma once

#include "expgame/hetero.hpp"
#include "expgame/params.hpp"

namespace fixtures {

// n_agents, lambda, discount, pi_s, r_w, r_l, pi_w, pi_l
inline expgame::GameParams eff() { return {2, 1.0, 1.0, 1.0, 0.0, 0.0, 3.0, 1.0}; }
inline expgame::GameParams lump() { return {2, 1.0, 1.0, 1.0, 2.0, 0.0, 2.0, 2.0}; }
inline expgame::GameParams under() { return {2, 1.0, 1.0, 1.0, 0.0, 0.0, 3.0, 2.0}; }
inline expgame::GameParams over() { return {2, 1.0, 1.0, 1.0, 0.0, 0.0, 4.0, 0.0}; }

inline expgame::HeteroParams het() {
  expgame::HeteroParams hp;
  hp.mu = {1.0, 2.0};
  hp.lambda = 1.0;
  hp.discount = 1.0;
  hp.pi_s = 1.0;
  hp.r_l = {0.0, 0.0};
  hp.pi_l = {1.0, 2.0};
  hp.r_total = 0.0;
  hp.pi_total = 6.0;
  return hp;
}

}  // namespace fixtures
