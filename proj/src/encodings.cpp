#include "vccts/encodings.hpp"

#include <algorithm>

#include "vccts/error.hpp"
#include "vccts/parser.hpp"

namespace vccts {

namespace {

bool has_state(const TreeAutomaton& a, const std::string& q) {
  return std::find(a.states.begin(), a.states.end(), q) != a.states.end();
}

}  // namespace

TermPtr automaton_body(const TreeAutomaton& a, const std::string& q, const std::set<std::string>& visited,
                       const std::map<std::string, std::string>& constant_of, EmptyState empty) {
  if (visited.count(q)) return term::constant(constant_of.at(q));
  auto inner = visited;
  inner.insert(q);
  std::vector<TermPtr> summands;
  for (const auto& tr : a.transitions) {
    if (tr.from != q) continue;
    std::vector<TermPtr> kids;
    for (const auto& target : tr.targets) kids.push_back(automaton_body(a, target, inner, constant_of, empty));
    summands.push_back(term::input(tr.symbol, "x", std::move(kids)));
  }
  if (summands.empty()) return empty == EmptyState::Idle ? term::idle() : term::nil();
  return term::sum(summands);
}

TermPtr automaton_to_process(const TreeAutomaton& a, const std::string& q, DefEnv& env, EmptyState empty) {
  if (!has_state(a, q)) throw Error("unknown automaton state '" + q + "'");
  for (const auto& tr : a.transitions) {
    if (!has_state(a, tr.from)) throw Error("transition from unknown state '" + tr.from + "'");
    for (const auto& t : tr.targets) {
      if (!has_state(a, t)) throw Error("transition to unknown state '" + t + "'");
    }
    const auto ar = env.arity(tr.symbol);
    if (!ar) throw SyntaxError("undeclared symbol '" + tr.symbol + "'");
    if (static_cast<std::size_t>(*ar) != tr.targets.size()) {
      throw SyntaxError("transition on '" + tr.symbol + "' has " + std::to_string(tr.targets.size()) +
                        " targets, arity is " + std::to_string(*ar));
    }
  }
  std::map<std::string, std::string> constant_of;
  for (const auto& s : a.states) {
    const auto* existing = env.find(s);
    constant_of[s] = existing ? a.name + "_" + s : s;
  }
  for (const auto& s : a.states) {
    env.define({constant_of[s], {}, automaton_body(a, s, {}, constant_of, empty)});
  }
  return term::constant(constant_of.at(q));
}

TermPtr tree_to_process(const SigmaTree& t, const Value& v) {
  if (t.is_leaf()) return term::idle();
  std::vector<TermPtr> kids;
  for (const auto& c : t.children) kids.push_back(tree_to_process(c, v));
  return term::output(t.symbol, expr::lit(v), std::move(kids));
}

bool recognizes(const TreeAutomaton& a, const std::string& q, const SigmaTree& t) {
  if (t.is_leaf()) {
    return std::none_of(a.transitions.begin(), a.transitions.end(),
                        [&](const AutomatonTransition& tr) { return tr.from == q; });
  }
  for (const auto& tr : a.transitions) {
    if (tr.from != q || tr.symbol != t.symbol || tr.targets.size() != t.children.size()) continue;
    bool all = true;
    for (std::size_t i = 0; i < t.children.size() && all; ++i) all = recognizes(a, tr.targets[i], t.children[i]);
    if (all) return true;
  }
  return false;
}

NetState vccs_compose(const std::vector<TermPtr>& components, const std::set<std::string>& restricted,
                      const DefEnv& env) {
  std::set<std::string> names(restricted);
  for (const auto& c : components) {
    auto s = sort_of(c, env);
    names.insert(s.begin(), s.end());
  }
  for (const auto& n : names) {
    const auto ar = env.arity(n);
    if (ar && *ar != 1) throw SyntaxError("symbol '" + n + "' is not unary");
  }
  std::vector<std::string> locs;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < components.size(); ++i) {
    locs.push_back("s" + std::to_string(i + 1));
    for (std::size_t j = 0; j < i; ++j) edges.emplace_back(j, i);
  }
  TermPtr g = term::graph(std::move(locs), std::move(edges), components);
  if (!restricted.empty()) g = term::restrict(g, restricted);
  return flatten(g, env);
}

std::string abp_source(AbpVariant variant) {
  const std::string end_branch =
      variant == AbpVariant::Repaired ? "~ack((Ack, b)).(Succ(t2))" : "Succ(t2)";
  return R"(# Alternating bit protocol: sender P1, receiver P2, helper A.
symbol send/1, ack/1, f/1;

def A = f(x).A;
def Succ(t) = *;

def P1(t1, b) =
  if null(t1)
  then ~send((End, b)).(ack(x).(if x = (Ack, b) then 0 else ~f(0).(P1(t1, b))))
  else ~send((head(t1), b)).(ack(x).(if x = (Ack, b)
                                     then ~f(0).(P1(tail(t1), 1 - b))
                                     else ~f(0).(P1(t1, b))));

def P2(t2, b) =
  send(x).(if snd(x) = b
           then (if fst(x) = End
                 then )" + end_branch + R"(
                 else ~ack((Ack, b)).(P2(append(t2, fst(x)), 1 - b)))
           else ~ack((Ack, 1 - b)).(P2(t2, b)));
)";
}

AbpSystem abp_system(const std::vector<Value>& messages, int b, AbpVariant variant) {
  if (b != 0 && b != 1) throw Error("bit must be 0 or 1");
  auto m = parse_module(abp_source(variant));
  AbpSystem out;
  out.env = m.env;
  const auto t = expr::lit(Value::list(messages));
  const auto bit = expr::lit(Value::integer(b));
  const auto empty = expr::lit(Value::list({}));
  out.term = compose(compose(term::constant("A"), term::constant("P1", {t, bit}), true, out.env),
                     term::constant("P2", {empty, bit}), true, out.env);
  out.state = flatten(out.term, out.env);
  return out;
}

bool abp_delivered(const NetState& state, const std::vector<Value>& messages) {
  const std::string succ = to_string(term::constant("Succ", {expr::lit(Value::list(messages))}));
  bool a = false, nil = false, done = false;
  for (const auto& [_, c] : state.comp) {
    const std::string s = to_string(c);
    if (s == "A") a = true;
    else if (s == "0") nil = true;
    else if (s == succ) done = true;
    else if (s.find("P1") != std::string::npos || s.find("P2") != std::string::npos) return false;
  }
  return a && nil && done;
}

}  // namespace vccts
