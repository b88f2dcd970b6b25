#include <doctest.h>

#include "support.hpp"
#include "vccts/encodings.hpp"
#include "vccts/generators.hpp"
#include "vccts/json_io.hpp"

using namespace vccts;

TEST_SUITE("json") {
  TEST_CASE("states round-trip") {
    auto rng = testing::rng(9);
    for (int round = 0; round < 40; ++round) {
      DefEnv env;
      auto s = flatten(random_process(rng, env), env);
      auto j = Json::parse(to_json(s).dump());
      CHECK(state_key(state_from_json(j, env), env) == state_key(s, env));
    }
  }

  TEST_CASE("derived states round-trip") {
    auto sys = abp_system(testing::ints({1}), 0);
    auto space = reachable(sys.state, sys.env);
    for (std::size_t i = 0; i < space.size(); ++i) {
      auto j = Json::parse(to_json(space.state(i)).dump());
      CHECK(state_key(state_from_json(j, sys.env), sys.env) == state_key(space.state(i), sys.env));
    }
  }

  TEST_CASE("restricted names survive") {
    auto l = testing::load("symbol f/1; process P = (f(x).(*) | ~f(1).(*)) restrict {f} (+) f(x).(*);");
    auto s = l.state("P");
    auto back = state_from_json(to_json(s), l.module.env);
    CHECK(back.restricted == s.restricted);
    CHECK(state_key(back, l.module.env) == state_key(s, l.module.env));
  }

  TEST_CASE("reports") {
    auto l = testing::load("symbol f/1, g/1; process L = ~f(1).(0) | ~g(2).(0);"
                           "process R = ~f(1).(~g(2).(0)) + ~g(2).(~f(1).(0));");
    GameConfig cfg;
    cfg.universe = testing::ints({1, 2});
    auto w = to_json(weak_bisim(l.state("L"), l.state("R"), l.module.env, cfg));
    CHECK(w["verdict"] == "not");
    CHECK(w["witness"].size() >= 1);
    auto b = to_json(weak_barbed_bisim(l.state("L"), l.state("R"), l.module.env, cfg));
    CHECK(b["barb"] == Json::array({"~f", "~g"}));
    auto sp = to_json(reachable(l.state("L"), l.module.env));
    CHECK(sp["status"] == "complete");
  }
}
