#include <doctest.h>

#include "support.hpp"
#include "vccts/error.hpp"

using namespace vccts;

namespace {

Barb co(const char* f) { return {f, Polarity::Co}; }
Barb plain(const char* f) { return {f, Polarity::Plain}; }

const char* kTwoOutputs = "symbol f/2, g/2; process P = ~f(3).(*, *) | ~g(4).(*, *);";

}  // namespace

TEST_SUITE("net-state") {
  TEST_CASE("flatten of a complete composition") {
    auto l = testing::load("symbol f/1; process P = f(x).(*) | ~f(3).(*);");
    auto s = l.state("P");
    CHECK(s.comp.size() == 2);
    CHECK(s.graph.edge_count() == 1);
    CHECK(s.restricted.empty());
    CHECK(s.locations() == std::vector<Loc>{1, 2});
  }

  TEST_CASE("restricted names on both sides stay apart") {
    auto l = testing::load("symbol f/1; process P = (f(x).(*) restrict {f}) (+) (~f(1).(*) restrict {f});");
    auto s = l.state("P");
    CHECK(s.comp.size() == 2);
    CHECK(s.graph.edge_count() == 0);
    CHECK(s.restricted.size() == 2);
    CHECK(s.restricted.count("f"));
  }

  TEST_CASE("flatten of a mixed composition") {
    auto l = testing::load("symbol f/1; def A1 = ~f(5).A1; def A2 = f(x).A2; def A3 = f(x).A3;"
                           "process S = (A1 | A2) (+) A3;");
    auto s = l.state("S");
    CHECK(s.locations() == std::vector<Loc>{1, 2, 3});
    CHECK(s.graph.edges() == std::vector<LocPair>{{1, 2}});
  }

  TEST_CASE("non-canonical input is rejected") {
    auto m = parse_module("symbol f/1; def A = f(x).A; def B(b) = if b = 0 then A else 0; process P = B(0);");
    CHECK_THROWS_AS(flatten(m.process("P"), m.env), SyntaxError);
  }

  TEST_CASE("head forms") {
    auto m = parse_module("symbol f/1; def A(x) = ~f(x + 1).(*);");
    auto heads = cs_head(term::constant("A", {expr::lit(Value::integer(5))}), m.env);
    REQUIRE(heads.size() == 1);
    CHECK(heads[0].kind == Head::Kind::Output);
    CHECK(heads[0].symbol == "f");
    CHECK(heads[0].value == Value::integer(6));

    auto cond = parse_process("if true then f(x).(0) + ~f(1).(*) else 0", m.env);
    auto hs = cs_head(cond, m.env);
    REQUIRE(hs.size() == 2);
    CHECK(hs[0].kind == Head::Kind::Input);
    CHECK(hs[1].kind == Head::Kind::Output);

    auto nil = cs_head(term::nil(), m.env);
    REQUIRE(nil.size() == 1);
    CHECK(nil[0].kind == Head::Kind::Nil);
  }

  TEST_CASE("component barbs") {
    auto m = parse_module("symbol f/2, g/1;");
    CHECK(barbs_of_component(parse_process("~f(3).(*, *)", m.env), m.env) == BarbSet{co("f")});
    CHECK(barbs_of_component(term::nil(), m.env).empty());
    CHECK(barbs_of_component(parse_process("f(x).(*, *) + ~g(1).(*)", m.env), m.env) == BarbSet{plain("f"), co("g")});
  }

  TEST_CASE("barbs of parallel outputs") {
    auto l = testing::load(kTwoOutputs);
    auto p = l.state("P");
    CHECK(has_barb(p, {co("f"), co("g")}, l.module.env));
    CHECK(has_barb(p, {co("f")}, l.module.env));
    CHECK(has_barb(p, {}, l.module.env));
    CHECK_FALSE(has_barb(p, {plain("f")}, l.module.env));
    auto sig = barb_signature(p, l.module.env);
    CHECK(sig == std::vector<BarbSet>{{co("f")}, {co("g")}});
  }

  TEST_CASE("restriction hides barbs") {
    auto l = testing::load("symbol f/2, g/2; process P = (~f(3).(*, *) | ~g(4).(*, *)) restrict {f};");
    auto p = l.state("P");
    CHECK_FALSE(has_barb(p, {co("f")}, l.module.env));
    CHECK(has_barb(p, {co("g")}, l.module.env));
  }

  TEST_CASE("barb sets need distinct locations") {
    auto l = testing::load("symbol f/1, g/1; process P = f(x).(*) + ~g(1).(*);");
    auto p = l.state("P");
    CHECK(has_barb(p, {plain("f")}, l.module.env));
    CHECK_FALSE(has_barb(p, {plain("f"), co("g")}, l.module.env));
  }

  TEST_CASE("idle states") {
    auto l = testing::load("symbol f/1; process I = * | *; process N = 0; process P = ~f(1).(*);");
    CHECK(is_idle(l.state("I"), l.module.env));
    CHECK_FALSE(is_idle(l.state("N"), l.module.env));
    CHECK_FALSE(is_idle(l.state("P"), l.module.env));
    for (const auto& b : barb_signature(l.state("I"), l.module.env)) CHECK(b.empty());
  }

  TEST_CASE("state keys ignore location names and restricted spelling") {
    auto l = testing::load(R"(symbol f/1, g/1;
process A = graph { a: f(x).(*); b: ~g(1).(*); edges { a -- b } };
process B = graph { b: ~g(1).(*); a: f(x).(*); edges { a -- b } };
process C = graph { a: f(x).(*); b: ~g(1).(*); };
process R1 = (f(x).(*) | ~f(1).(*)) restrict {f};
process R2 = (g(x).(*) | ~g(1).(*)) restrict {g};)");
    const auto& env = l.module.env;
    CHECK(state_key(l.state("A"), env) == state_key(l.state("B"), env));
    CHECK(state_key(l.state("A"), env) != state_key(l.state("C"), env));
    CHECK(state_key(l.state("R1"), env) == state_key(l.state("R2"), env));
  }

  TEST_CASE("attach adds fresh locations") {
    auto l = testing::load(kTwoOutputs);
    auto s = l.state("P");
    auto added = attach(s, term::singleton(term::idle()), l.module.env, true);
    REQUIRE(added.size() == 1);
    CHECK(added[0] == 3);
    CHECK(s.graph.neighbors(3).size() == 2);
  }
}
