#include <doctest.h>

#include "support.hpp"
#include "vccts/encodings.hpp"
#include "vccts/error.hpp"
#include "vccts/generators.hpp"
#include "vccts/reduction.hpp"

using namespace vccts;

namespace {

const char* kAutomaton = R"(symbol f/2, g1/2, g2/2;
automaton Fg {
  states Q, Q1, Q2, Q11, Q12, Q21, Q22;
  Q: f(x) -> (Q1, Q2);
  Q1: g1(x) -> (Q11, Q12);
  Q2: g2(x) -> (Q21, Q22);
}
tree t = f(x).(g1(x).(g2(x).(*, *), *), *);
tree t2 = f(x).(g1(x).(*, *), g2(x).(*, *));)";

}  // namespace

TEST_SUITE("encodings") {
  TEST_CASE("automaton encoding") {
    auto m = parse_module(kAutomaton);
    DefEnv env = m.env;
    auto q = automaton_to_process(m.automata.at("Fg"), "Q", env);
    CHECK(to_string(q) == "Q");
    CHECK(to_string(env.lookup("Q").body) == "f(x).(g1(x).(*, *), g2(x).(*, *))");
    CHECK(classify_definitions(env).at("Q").usable_as_component());
    CHECK_THROWS_AS(automaton_to_process(m.automata.at("Fg"), "Nope", env), Error);
  }

  TEST_CASE("states without transitions") {
    auto m = parse_module("symbol f/1; automaton A { states Q; }");
    DefEnv env = m.env;
    automaton_to_process(m.automata.at("A"), "Q", env);
    CHECK(env.lookup("Q").body->kind == Term::Kind::Idle);
    DefEnv env2 = m.env;
    automaton_to_process(m.automata.at("A"), "Q", env2, EmptyState::Nil);
    CHECK(env2.lookup("Q").body->kind == Term::Kind::Nil);
  }

  TEST_CASE("self loops become guarded recursion") {
    auto m = parse_module("symbol f/1; automaton A { states Q, E; Q: f(x) -> (Q); Q: f(x) -> (E); }");
    DefEnv env = m.env;
    automaton_to_process(m.automata.at("A"), "Q", env);
    CHECK(to_string(env.lookup("Q").body) == "f(x).(Q) + f(x).(*)");
    CHECK(classify_definitions(env).at("Q").usable_as_component());
  }

  TEST_CASE("name clashes are prefixed") {
    auto m = parse_module("symbol f/1; def Q = *; automaton A { states Q; }");
    DefEnv env = m.env;
    CHECK(to_string(automaton_to_process(m.automata.at("A"), "Q", env)) == "A_Q");
  }

  TEST_CASE("tree encoding") {
    auto m = parse_module(kAutomaton);
    CHECK(tree_to_process(SigmaTree::leaf(), Value::integer(1))->kind == Term::Kind::Idle);
    CHECK(to_string(tree_to_process(m.trees.at("t"), Value::integer(1))) == "~f(1).(~g1(1).(~g2(1).(*, *), *), *)");
    auto single = SigmaTree::node("f", {SigmaTree::leaf(), SigmaTree::leaf()});
    CHECK(to_string(tree_to_process(single, Value::integer(0))) == "~f(0).(*, *)");
  }

  TEST_CASE("recognition") {
    auto m = parse_module(kAutomaton);
    const auto& a = m.automata.at("Fg");
    CHECK_FALSE(recognizes(a, "Q", m.trees.at("t")));
    CHECK(recognizes(a, "Q", m.trees.at("t2")));
    CHECK(recognizes(a, "Q11", SigmaTree::leaf()));
    CHECK_FALSE(recognizes(a, "Q", SigmaTree::leaf()));
  }

  TEST_CASE("reduction accepts a tree the automaton rejects") {
    auto m = parse_module(kAutomaton);
    DefEnv env = m.env;
    auto q = automaton_to_process(m.automata.at("Fg"), "Q", env);
    auto s = flatten(compose(q, tree_to_process(m.trees.at("t"), Value::integer(1)), true, env), env);
    auto r = reduces_to_idle(s, env);
    CHECK(r.found);
    CHECK(r.steps.size() == 3);
  }

  TEST_CASE("recognized random trees reduce to idle") {
    auto rng = testing::rng(8);
    int done = 0;
    for (int i = 0; done < 30 && i < 400; ++i) {
      DefEnv env;
      auto a = random_automaton(rng, env);
      auto t = random_recognized_tree(rng, a, a.states.front());
      if (!t) continue;
      ++done;
      CHECK(recognizes(a, a.states.front(), *t));
      auto q = automaton_to_process(a, a.states.front(), env);
      auto s = flatten(compose(q, tree_to_process(*t, Value::integer(0)), true, env), env);
      CHECK(reduces_to_idle(s, env).found);
    }
    CHECK(done == 30);
  }

  TEST_CASE("complete-graph composition") {
    DefEnv env;
    env.declare_symbol("f", 1);
    env.declare_symbol("g", 1);
    env.declare_symbol("h", 2);
    auto f = term::output("f", expr::lit(Value::integer(1)), {term::nil()});
    auto g = term::output("g", expr::lit(Value::integer(2)), {term::nil()});
    auto two = vccs_compose({f, g}, {}, env);
    CHECK(two.comp.size() == 2);
    CHECK(two.graph.edge_count() == 1);
    CHECK(vccs_compose({f}, {}, env).graph.edge_count() == 0);
    CHECK(vccs_compose({f, g, term::idle()}, {}, env).graph.edge_count() == 3);
    CHECK(vccs_compose({f, g}, {"f"}, env).restricted.size() == 1);
    auto bin = term::output("h", expr::lit(Value::integer(1)), {term::nil(), term::nil()});
    CHECK_THROWS_AS(vccs_compose({bin}, {}, env), SyntaxError);
  }

  TEST_CASE("alternating bit protocol delivers") {
    for (int n = 0; n <= 2; ++n) {
      std::vector<Value> t;
      for (int i = 1; i <= n; ++i) t.push_back(Value::integer(i));
      auto sys = abp_system(t, 0);
      auto space = reachable(sys.state, sys.env);
      CHECK(space.status == Status::Complete);
      bool hit = false;
      for (std::size_t i = 0; i < space.size(); ++i) hit |= abp_delivered(space.state(i), t);
      CHECK(hit);
    }
    CHECK_THROWS_AS(abp_system({}, 2), Error);
    CHECK_THROWS_AS(abp_system({}, 0, AbpVariant::Verbatim), SyntaxError);
  }

  TEST_CASE("protocol invariant along every state") {
    std::vector<Value> t = testing::ints({1, 2});
    auto sys = abp_system(t, 1);
    auto space = reachable(sys.state, sys.env);
    for (std::size_t i = 0; i < space.size(); ++i) {
      std::optional<Value> sent, received;
      for (const auto& [_, c] : space.state(i).comp) {
        if (c->kind != Term::Kind::Const) continue;
        if (c->name == "P1") sent = eval_expr(*c->args[0]);
        if (c->name == "P2" || c->name == "Succ") received = eval_expr(*c->args[0]);
      }
      if (!sent || !received) continue;
      // received prefix ++ unsent suffix is the original list, up to one message in flight
      auto r = received->items();
      auto s = sent->items();
      std::vector<Value> joined = r;
      joined.insert(joined.end(), s.begin(), s.end());
      bool ok = joined == t;
      if (!ok && !r.empty()) {
        joined.assign(r.begin(), r.end() - 1);
        joined.insert(joined.end(), s.begin(), s.end());
        ok = joined == t;
      }
      CHECK(ok);
    }
  }
}
