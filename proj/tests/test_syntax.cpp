#include <doctest.h>

#include "support.hpp"
#include "vccts/error.hpp"
#include "vccts/expr.hpp"

using namespace vccts;

namespace {

DefEnv symbols(std::initializer_list<std::pair<const char*, int>> decl) {
  DefEnv env;
  for (auto [n, a] : decl) env.declare_symbol(n, a);
  return env;
}

Value eval(const std::string& src) { return eval_expr(*parse_expr(src)); }

}  // namespace

TEST_SUITE("expr") {
  TEST_CASE("list and pair primitives") {
    CHECK(eval("head([1, 2])") == Value::integer(1));
    CHECK(eval("snd((Ack, 0))") == Value::integer(0));
    CHECK(eval("append([], 5)") == Value::list({Value::integer(5)}));
    CHECK(eval("tail([1, 2])") == Value::list({Value::integer(2)}));
    CHECK(eval("fst((Ack, 0))") == Value::atom("Ack"));
  }

  TEST_CASE("boolean expressions") {
    CHECK(eval_bexpr(*parse_expr("null([])")));
    CHECK_FALSE(eval_bexpr(*parse_expr("(Ack, 0) = (Ack, 1)")));
    CHECK(eval("1 - 0") == Value::integer(1));
    CHECK_THROWS_AS(eval_bexpr(*parse_expr("1 + 1")), EvalError);
  }

  TEST_CASE("evaluation errors") {
    CHECK_THROWS_AS(eval("head([])"), EvalError);
    CHECK_THROWS_AS(eval("1 + (A, 2)"), EvalError);
    CHECK_THROWS_AS(eval_expr(*expr::var("x")), EvalError);
  }

  TEST_CASE("substitution and folding") {
    auto e = parse_expr("x + 1");
    CHECK(free_vars(*e) == std::set<std::string>{"x"});
    auto closed = subst(e, "x", Value::integer(4));
    CHECK(is_closed(*closed));
    CHECK(eval_expr(*closed) == Value::integer(5));
  }

  TEST_CASE("value ordering and printing") {
    CHECK(Value::integer(1) < Value::integer(2));
    CHECK(Value::pair(Value::atom("Ack"), Value::integer(0)).str() == "(Ack, 0)");
    CHECK(parse_value("[1, (End, 0)]").items().size() == 2);
  }
}

TEST_SUITE("core-syntax") {
  TEST_CASE("canonical classes") {
    auto env = symbols({{"f", 1}, {"g", 1}});
    auto cgs = term::sum(term::input("f", "x", {term::nil()}), term::output("g", expr::lit(Value::integer(1)), {term::idle()}));
    CHECK(check_canonical(cgs, env).cls == CanonClass::CGS);
    CHECK(check_canonical(term::idle(), env).cls == CanonClass::CGS);
    CHECK(check_canonical(term::singleton(term::idle()), env).cls == CanonClass::CP);
    auto bad = term::sum(term::var("X"), term::input("f", "x", {term::nil()}));
    auto c = check_canonical(bad, env);
    CHECK(c.cls == CanonClass::NotCanonical);
    CHECK_FALSE(c.reason.empty());
  }

  TEST_CASE("a constant inside a conditional branch is not a guarded sum") {
    auto m = parse_module("symbol f/1; def A = f(x).A; def B(b) = if b = 0 then A else 0;");
    auto cls = classify_definitions(m.env);
    CHECK(cls.at("A").canonical());
    CHECK(cls.at("B").cls == CanonClass::NotCanonical);
  }

  TEST_CASE("recursive guarded sums") {
    auto m = parse_module("symbol f/1; def A1 = ~f(5).A1; def L = L;");
    auto cls = classify_definitions(m.env);
    CHECK(cls.at("A1").usable_as_component());
    CHECK(cls.at("L").cls == CanonClass::NotCanonical);
  }

  TEST_CASE("value substitution respects binders") {
    auto env = symbols({{"f", 1}, {"g", 1}});
    auto out = term::output("f", expr::var("x"), {term::idle()});
    CHECK(to_string(subst_value(out, "x", Value::integer(3))) == "~f(3).(*)");
    auto bound = term::input("f", "x", {term::output("g", expr::var("x"), {term::idle()})});
    CHECK(to_string(subst_value(bound, "x", Value::integer(1))) == to_string(bound));
    auto other = term::input("f", "y", {term::output("g", expr::var("x"), {term::idle()})});
    CHECK(to_string(subst_value(other, "x", Value::integer(1))) == "f(y).(~g(1).(*))");
  }

  TEST_CASE("process substitution") {
    auto p = term::output("f", expr::lit(Value::integer(1)), {term::idle()});
    CHECK(to_string(subst_process(term::var("X"), "X", p)) == to_string(p));
    auto host = term::input("f", "x", {term::var("X")});
    CHECK(to_string(subst_process(host, "X", term::constant("A1"))) == "f(x).(A1)");
    CHECK(subst_process(term::nil(), "X", p)->kind == Term::Kind::Nil);
  }

  TEST_CASE("sorts") {
    auto env = symbols({{"f", 1}, {"g", 1}});
    CHECK(sort_of(term::idle(), env).empty());
    auto t = term::input("f", "x", {term::output("g", expr::var("x"), {term::idle()})});
    CHECK(sort_of(t, env) == std::set<std::string>{"f", "g"});
    auto r = term::restrict(term::singleton(term::input("f", "x", {term::idle()})), {"f"});
    CHECK(sort_of(r, env).empty());
  }

  TEST_CASE("symbol table") {
    DefEnv env;
    env.declare_symbol("f", 2);
    CHECK(env.arity("f") == 2);
    CHECK(env.arity("*") == 0);
    CHECK_THROWS_AS(env.declare_symbol("f", 1), SyntaxError);
    CHECK_THROWS_AS(env.declare_symbol("h", 0), SyntaxError);
  }
}

TEST_SUITE("parser") {
  TEST_CASE("round trip through the printer") {
    auto m = parse_module("symbol f/1, g/2; process P = f(x).(~g(x + 1).(*, 0)) + ~f(2).(*);");
    auto t = m.process("P");
    auto again = parse_process(to_string(t), m.env);
    CHECK(to_string(again) == to_string(t));
  }

  TEST_CASE("errors carry positions") {
    try {
      parse_module("symbol f/1;\nprocess P = f(x).(*, *);");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).rfind("2:", 0) == 0);
    }
    CHECK_THROWS_AS(parse_module("process P = g(x).(*);"), Error);
    CHECK_THROWS_AS(parse_module("symbol f/1; process P = ~f(1).(*) +;"), ParseError);
  }

  TEST_CASE("automata and trees") {
    auto m = parse_module(R"(symbol f/2;
automaton A { states Q, R; Q: f(x) -> (R, R); }
tree t = f(x).(*, *);)");
    CHECK(m.automata.at("A").transitions.size() == 1);
    CHECK(m.trees.at("t").size() == 3);
  }

  TEST_CASE("definitions across chunks") {
    Module m = parse_module("symbol f/1; def A = f(x).A;");
    parse_into(m, "process P = A | ~f(0).(*);");
    CHECK(m.processes.size() == 1);
    CHECK(flatten(m.process("P"), m.env).comp.size() == 2);
  }
}
