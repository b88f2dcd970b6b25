#include <doctest.h>

#include "support.hpp"
#include "vccts/equivalence.hpp"
#include "vccts/error.hpp"
#include "vccts/generators.hpp"

using namespace vccts;

namespace {

const char* kPair = R"(symbol f/1, g/1;
process L = ~f(1).(0) | ~g(2).(0);
process R = ~f(1).(~g(2).(0)) + ~g(2).(~f(1).(0));
process O = ~f(7).(*);
process Z = *;
def A1 = ~f(5).A1;
process T = A1;
process T2 = A1 | *;)";

GameConfig config() {
  GameConfig cfg;
  cfg.universe = testing::ints({1, 2});
  return cfg;
}

NetState pad(const NetState& p, std::mt19937& rng) {
  NetState q = p;
  const Loc fresh = p.graph.max_vertex() + 1;
  q.graph.add_vertex(fresh);
  q.comp[fresh] = term::idle();
  for (Loc l : p.locations())
    if (rng() % 2) q.graph.add_edge(l, fresh);
  return q;
}

}  // namespace

TEST_SUITE("equivalence") {
  TEST_CASE("reflexivity") {
    auto l = testing::load(kPair);
    for (const char* n : {"L", "R", "O", "T"}) {
      auto p = l.state(n);
      CHECK(weak_bisim(p, p, l.module.env, config()).verdict == Verdict::Bisimilar);
      CHECK(weak_barbed_bisim(p, p, l.module.env, config()).verdict == Verdict::Bisimilar);
    }
  }

  TEST_CASE("parallel outputs against their interleaving") {
    auto l = testing::load(kPair);
    auto p = l.state("L"), q = l.state("R");
    auto w = weak_bisim(p, q, l.module.env, config());
    CHECK(w.verdict == Verdict::Distinguished);
    REQUIRE_FALSE(w.witness.empty());
    CHECK(w.witness.front().size == 2);
    CHECK(w.witness.front().from_left);
    auto b = weak_barbed_bisim(p, q, l.module.env, config());
    CHECK(b.verdict == Verdict::Distinguished);
    REQUIRE(b.barb.has_value());
    CHECK(*b.barb == BarbSet{{"f", Polarity::Co}, {"g", Polarity::Co}});
    CHECK(b.barb_on_left);
  }

  TEST_CASE("idle padding") {
    auto l = testing::load(kPair);
    auto t = l.state("T"), t2 = l.state("T2");
    CHECK(weak_bisim(t, t2, l.module.env, config()).verdict == Verdict::Bisimilar);
    CHECK(weak_barbed_bisim(t, t2, l.module.env, config()).verdict == Verdict::Bisimilar);
  }

  TEST_CASE("localized relations restrict the defender") {
    auto l = testing::load("symbol f/1; process A = ~f(1).(*) (+) *; process B = * (+) ~f(1).(*);");
    auto a = l.state("A"), b = l.state("B");
    CHECK(weak_bisim(a, b, l.module.env, config()).verdict == Verdict::Bisimilar);
    CHECK(weak_bisim(a, b, l.module.env, config(), LocRelation{{1, 1}, {2, 2}}).verdict == Verdict::Distinguished);
    CHECK(weak_bisim(a, b, l.module.env, config(), LocRelation{{1, 2}, {2, 1}}).verdict == Verdict::Bisimilar);
    CHECK_THROWS_AS(weak_bisim(a, b, l.module.env, config(), LocRelation{{7, 1}}), Error);
  }

  TEST_CASE("approximants") {
    auto l = testing::load(kPair);
    auto r = stratified_bisim(l.state("L"), l.state("R"), l.module.env, config(), 3);
    REQUIRE(r.levels.size() == 4);
    CHECK(r.levels[0]);
    CHECK_FALSE(r.levels[1]);
    CHECK(r.stabilized);
    CHECK(r.verdict == Verdict::Distinguished);
    auto same = stratified_bisim(l.state("T"), l.state("T2"), l.module.env, config(), 4);
    CHECK(same.stabilized);
    CHECK(same.verdict == Verdict::Bisimilar);
  }

  TEST_CASE("image finiteness guard") {
    auto l = testing::load(kPair);
    auto r = image_finite_guard(l.state("T"), l.module.env, config());
    CHECK(r.within_bounds);
    CHECK(r.states == 1);
    CHECK(r.max_label_multisets == 1);
    auto chain = testing::load("symbol f/1; def C(n) = ~f(n).C(n + 1); def R = f(x).R; process P = C(0) | R;");
    GameConfig small = config();
    small.bounds = {30, 1000};
    auto c = image_finite_guard(chain.state("P"), chain.module.env, small);
    CHECK_FALSE(c.within_bounds);
    CHECK_FALSE(c.warnings.empty());
  }

  TEST_CASE("distinguishing contexts") {
    auto l = testing::load(kPair);
    const auto& env = l.module.env;
    auto c = distinguishing_context(l.state("L"), l.state("R"), env, config());
    CHECK(c.verified);
    CHECK(c.derivatives >= 1);
    auto pr = parallel_with(l.state("L"), c.context, c.env);
    auto qr = parallel_with(l.state("R"), c.context, c.env);
    CHECK(weak_barbed_bisim(pr, qr, c.env, config()).verdict == Verdict::Distinguished);

    GameConfig seven;
    seven.universe = testing::ints({7});
    auto d = distinguishing_context(l.state("O"), l.state("Z"), env, seven);
    CHECK(d.verified);
    CHECK_THROWS_AS(distinguishing_context(l.state("T"), l.state("T2"), env, config()), Error);
  }

  TEST_CASE("padding property on random processes") {
    auto rng = testing::rng(6);
    GameConfig cfg;
    for (int round = 0; round < 12; ++round) {
      DefEnv env;
      GenOptions opts;
      opts.max_components = 3;
      opts.allow_recursion = true;
      auto p = flatten(random_process(rng, env, opts), env);
      auto q = pad(p, rng);
      CHECK(weak_bisim(p, q, env, cfg).verdict == Verdict::Bisimilar);
      CHECK(weak_barbed_bisim(p, q, env, cfg).verdict == Verdict::Bisimilar);
    }
  }

  TEST_CASE("fixpoint, approximants and barbs agree on random pairs") {
    auto rng = testing::rng(7);
    GameConfig cfg;
    for (int round = 0; round < 15; ++round) {
      DefEnv env;
      GenOptions opts;
      opts.max_components = 3;
      auto t = random_process(rng, env, opts);
      auto u = rng() % 3 == 0 ? t : random_process(rng, env, opts);
      auto p = flatten(t, env), q = flatten(u, env);
      auto w = weak_bisim(p, q, env, cfg);
      auto s = stratified_bisim(p, q, env, cfg, 40);
      CHECK(s.stabilized);
      CHECK(s.verdict == w.verdict);
      if (w.verdict == Verdict::Bisimilar) CHECK(weak_barbed_bisim(p, q, env, cfg).verdict == Verdict::Bisimilar);
    }
  }
}
