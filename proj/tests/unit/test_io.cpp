#include <cmath>
#include <cstdlib>
#include <limits>

#include "doctest.h"
#include "expgame/errors.hpp"
#include "expgame/io.hpp"
#include "fixtures.hpp"
#include "numerics.hpp"

using namespace expgame;

TEST_CASE("game parameters round-trip exactly") {
  ref::Draw d(71);
  for (int i = 0; i < 500; ++i) {
    GameParams g{d.integer(1, 9), d.uniform(0, 5), d.uniform(0, 5), d.uniform(0, 5),
                 d.uniform(-5, 5), d.uniform(-5, 5), d.uniform(-5, 5), d.uniform(-5, 5)};
    CHECK(game_params_from_json(to_json(g)) == g);
  }
  CHECK(to_json(fixtures::over()) ==
        R"({"n_agents":2,"lambda":1.0,"discount":1.0,"pi_s":1.0,"r_w":0.0,"r_l":0.0,"pi_w":4.0,"pi_l":0.0})");
}

TEST_CASE("strict keys") {
  const std::string ok = to_json(fixtures::eff());
  CHECK_NOTHROW((void)game_params_from_json(ok));
  std::string extra = ok;
  extra.insert(extra.size() - 1, R"(,"bonus":1)");
  CHECK_THROWS_AS((void)game_params_from_json(extra), InvalidParams);
  CHECK_THROWS_AS((void)game_params_from_json(R"({"n_agents":2})"), InvalidParams);
  CHECK_THROWS_AS((void)game_params_from_json("not json"), InvalidParams);
  std::string text = ok;
  text.replace(text.find("1.0"), 3, "\"x\"");
  CHECK_THROWS_AS((void)game_params_from_json(text), InvalidParams);
}

TEST_CASE("contracts and capacities") {
  const SharingContract c{ContractFamily::EffortBased, 0.25, -0.5};
  const SharingContract back = contract_from_json(to_json(c));
  CHECK(back.family == c.family);
  CHECK(back.alpha_i == c.alpha_i);
  CHECK(back.alpha_c == c.alpha_c);
  CHECK(contract_from_json(R"({"alpha_i":1,"alpha_c":0.5})").family == ContractFamily::WinnerBased);
  const HeteroParams hp = fixtures::het();
  const HeteroParams h2 = hetero_params_from_json(to_json(hp));
  CHECK(h2.mu == hp.mu);
  CHECK(h2.pi_l == hp.pi_l);
  CHECK(h2.pi_total == hp.pi_total);
  CHECK_THROWS_AS((void)hetero_params_from_json(
                      R"({"mu":[1,2],"lambda":1,"discount":1,"pi_s":1,"r_l":[0],"pi_l":[1,2],"r_total":0,"pi_total":6})"),
                  InvalidParams);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  ref::Draw d(73);
  for (int i = 0; i < 1000; ++i) {
    const double x = d.uniform(-1e6, 1e6) * std::pow(10.0, d.integer(-20, 20));
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("csv") {
  CHECK(make_csv({"p", "v"}, {{0.5, 1.25}, {1.0, 2.0}}) == "p,v\n0.5,1.25\n1,2\n");
  CHECK_THROWS((void)make_csv({"p", "v"}, {{0.5}}));
}
