#include "vccts/generators.hpp"

#include <algorithm>

namespace vccts {

namespace {

std::size_t pick(std::mt19937& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
bool coin(std::mt19937& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

struct Gen {
  std::mt19937& rng;
  DefEnv& env;
  const GenOptions& opts;
  std::vector<std::string> recursive;  // constants usable as continuations

  std::vector<std::string> symbols() const {
    return opts.allow_binary ? std::vector<std::string>{"a", "b", "c"} : std::vector<std::string>{"a", "b"};
  }

  ExprPtr payload(bool bound) {
    if (bound && coin(rng, 0.3)) return expr::var("x");
    return expr::lit(opts.universe[pick(rng, opts.universe.size())]);
  }

  TermPtr prefix(std::size_t depth, bool bound) {
    const auto syms = symbols();
    const std::string f = syms[pick(rng, syms.size())];
    const int arity = *env.arity(f);
    std::vector<TermPtr> kids;
    const bool input = coin(rng);
    for (int i = 0; i < arity; ++i) kids.push_back(child(depth, bound || input));
    if (input) return term::input(f, "x", std::move(kids));
    return term::output(f, payload(bound), std::move(kids));
  }

  TermPtr sum(std::size_t depth, bool bound) {
    if (depth == 0) return coin(rng, 0.7) ? term::idle() : term::nil();
    if (bound && coin(rng, 0.15)) {
      auto guard = expr::apply(Op::Eq, {expr::var("x"), expr::lit(opts.universe[pick(rng, opts.universe.size())])});
      return term::cond(guard, sum(depth - 1, bound), sum(depth - 1, bound));
    }
    TermPtr s = prefix(depth - 1, bound);
    if (coin(rng, 0.3)) s = term::sum(s, prefix(depth - 1, bound));
    return s;
  }

  TermPtr child(std::size_t depth, bool bound) {
    if (!recursive.empty() && coin(rng, 0.15)) return term::constant(recursive[pick(rng, recursive.size())]);
    if (depth == 0 || coin(rng, 0.25)) return coin(rng, 0.8) ? term::idle() : term::nil();
    if (coin(rng, 0.15)) {
      auto edges = coin(rng) ? std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}}
                             : std::vector<std::pair<std::size_t, std::size_t>>{};
      return term::graph({"l", "r"}, std::move(edges), {sum(depth, bound), sum(depth, bound)});
    }
    return sum(depth, bound);
  }
};

}  // namespace

void declare_generator_symbols(DefEnv& env) {
  env.declare_symbol("a", 1);
  env.declare_symbol("b", 1);
  env.declare_symbol("c", 2);
}

TermPtr random_process(std::mt19937& rng, DefEnv& env, const GenOptions& opts) {
  declare_generator_symbols(env);
  Gen g{rng, env, opts, {}};
  if (opts.allow_recursion && coin(rng, 0.5)) {
    // R ::= a(x).R or ~b(v).R, a unary loop that keeps the location count fixed
    std::string name;
    for (std::size_t k = 1;; ++k) {
      name = "Loop" + std::to_string(k);
      if (!env.find(name)) break;
    }
    const std::string f = coin(rng) ? "a" : "b";
    TermPtr body = coin(rng) ? term::input(f, "x", {term::constant(name)})
                             : term::output(f, g.payload(false), {term::constant(name)});
    env.define({name, {}, body});
    g.recursive.push_back(name);
  }
  const std::size_t n = 1 + pick(rng, opts.max_components);
  std::vector<std::string> locs;
  std::vector<TermPtr> comps;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    locs.push_back("p" + std::to_string(i + 1));
    if (!g.recursive.empty() && coin(rng, 0.2)) {
      comps.push_back(term::constant(g.recursive[pick(rng, g.recursive.size())]));
    } else {
      comps.push_back(g.sum(1 + pick(rng, opts.max_depth), false));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (coin(rng, 0.6)) edges.emplace_back(j, i);
    }
  }
  TermPtr t = term::graph(std::move(locs), std::move(edges), std::move(comps));
  if (opts.allow_restriction && coin(rng, 0.2)) t = term::restrict(t, {coin(rng) ? "a" : "b"});
  return t;
}

TreeAutomaton random_automaton(std::mt19937& rng, DefEnv& env) {
  env.declare_symbol("u", 1);
  env.declare_symbol("v", 2);
  TreeAutomaton a;
  a.name = "Rnd";
  const std::size_t n = 2 + pick(rng, 3);
  for (std::size_t i = 0; i < n; ++i) a.states.push_back("S" + std::to_string(i));
  // the last state never has transitions, so leaves always have somewhere to go
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t k = pick(rng, 3);
    for (std::size_t t = 0; t < k; ++t) {
      AutomatonTransition tr;
      tr.from = a.states[i];
      tr.symbol = coin(rng) ? "u" : "v";
      const std::size_t arity = tr.symbol == "u" ? 1 : 2;
      for (std::size_t c = 0; c < arity; ++c) tr.targets.push_back(a.states[pick(rng, n)]);
      a.transitions.push_back(std::move(tr));
    }
  }
  return a;
}

std::optional<SigmaTree> random_recognized_tree(std::mt19937& rng, const TreeAutomaton& a, const std::string& q,
                                                std::size_t max_depth) {
  std::vector<const AutomatonTransition*> options;
  for (const auto& tr : a.transitions) {
    if (tr.from == q) options.push_back(&tr);
  }
  if (options.empty()) return SigmaTree::leaf();
  if (max_depth == 0) return std::nullopt;
  std::shuffle(options.begin(), options.end(), rng);
  for (const auto* tr : options) {
    std::vector<SigmaTree> kids;
    bool ok = true;
    for (const auto& target : tr->targets) {
      auto sub = random_recognized_tree(rng, a, target, max_depth - 1);
      if (!sub) {
        ok = false;
        break;
      }
      kids.push_back(std::move(*sub));
    }
    if (ok) return SigmaTree::node(tr->symbol, std::move(kids));
  }
  return std::nullopt;
}

}  // namespace vccts
