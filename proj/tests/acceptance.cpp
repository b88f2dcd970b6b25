// One PASS/FAIL line per acceptance criterion. Optional argument: --seed=N.

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "vccts/encodings.hpp"
#include "vccts/equivalence.hpp"
#include "vccts/generators.hpp"
#include "vccts/parser.hpp"

using namespace vccts;

namespace {

unsigned g_seed = 7;
int g_failures = 0;

using Clock = std::chrono::steady_clock;

// Runs a criterion; `detail` collects a one-line summary.
void criterion(int n, const char* title, double limit_s, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  const auto t0 = Clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (secs > limit_s) {
    ok = false;
    detail << " over the " << limit_s << " s limit";
  }
  if (!ok) ++g_failures;
  std::cout << (ok ? "PASS" : "FAIL") << " " << n << " " << title << " [" << detail.str() << "; " << secs << " s]"
            << std::endl;
}

std::vector<Value> ints(std::initializer_list<int> xs) {
  std::vector<Value> out;
  for (int x : xs) out.push_back(Value::integer(x));
  return out;
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

const char* kTwoOutputs = "symbol f/2, g/2; process P = ~f(3).(*, *) | ~g(4).(*, *);";
const char* kTransmitter = "symbol f/1; def A1 = ~f(5).A1; def A2 = f(x).A2; def A3 = f(x).A3;"
                   "process S = (A1 | A2) (+) A3;";
const char* kTwoTaus = R"(symbol f1/1, g1/1, f2/2;
process PQ = graph {
  1: f1(x).(~g1(x).(*));
  2: f2(y).(*, *);
  3: ~f1(1).(*);
  4: ~f2(2).(*, *);
  edges { 1 -- 3, 2 -- 4 }
};)";
const char* kAutomaton = R"(symbol f/2, g1/2, g2/2;
automaton Fg {
  states Q, Q1, Q2, Q11, Q12, Q21, Q22;
  Q: f(x) -> (Q1, Q2);
  Q1: g1(x) -> (Q11, Q12);
  Q2: g2(x) -> (Q21, Q22);
}
tree t = f(x).(g1(x).(g2(x).(*, *), *), *);)";
const char* kInterleaving = R"(symbol f/1, g/1;
process L = ~f(1).(0) | ~g(2).(0);
process R = ~f(1).(~g(2).(0)) + ~g(2).(~f(1).(0));
process O = ~f(7).(*);
process Z = *;)";

bool c1(std::ostringstream& d) {
  auto m = parse_module(kTwoOutputs);
  auto p = flatten(m.process("P"), m.env);
  std::vector<Barb> alphabet{{"f", Polarity::Plain}, {"f", Polarity::Co}, {"g", Polarity::Plain}, {"g", Polarity::Co}};
  std::set<BarbSet> expected{{}, {{"f", Polarity::Co}}, {{"g", Polarity::Co}}, {{"f", Polarity::Co}, {"g", Polarity::Co}}};
  std::set<BarbSet> got;
  for (unsigned mask = 0; mask < 16; ++mask) {
    BarbSet b;
    for (unsigned i = 0; i < 4; ++i)
      if (mask & (1u << i)) b.insert(alphabet[i]);
    if (has_barb(p, b, m.env)) got.insert(b);
  }
  d << got.size() << " of 16 sets observed";
  return got == expected;
}

bool c2(std::ostringstream& d) {
  auto m = parse_module(kTransmitter);
  auto s = flatten(m.process("S"), m.env);
  auto steps = internal_steps(s, m.env);
  bool loop = false, bad_pair = false;
  for (const auto& st : steps) {
    loop |= state_key(st.target, m.env) == state_key(s, m.env);
    bad_pair |= (st.p == 1 && st.q == 3) || (st.p == 3 && st.q == 1);
  }
  auto space = reachable(s, m.env);
  d << steps.size() << " step(s), reachable " << space.size() << " " << to_string(space.status);
  return loop && !bad_pair && space.size() == 1 && space.status == Status::Complete;
}

bool c3(std::ostringstream& d) {
  auto m = parse_module(kTwoTaus);
  auto s = flatten(m.process("PQ"), m.env);
  std::size_t hits = 0;
  bool iso = false;
  for (const auto& st : multi_transitions(s, m.env, ints({1, 2}), 4)) {
    if (st.labels.size() != 2 || st.labels.tau_count() != 2) continue;
    ++hits;
    const auto cross = st.cross_edges({1, 2});
    d << "D' size " << cross.size();
    if (cross.size() != 5) continue;
    // compare as bipartite graphs, sides coloured
    auto key_of = [&](const std::vector<LocPair>& edges, const std::function<bool(Loc)>& left) {
      std::set<Loc> vs;
      for (auto [a, b] : edges) vs.insert({a, b});
      LocGraph g(std::vector<Loc>(vs.begin(), vs.end()), edges);
      std::map<Loc, std::string> col;
      for (Loc v : vs) col[v] = left(v) ? "L" : "R";
      return canonical_key(g, col);
    };
    std::set<Loc> left_desc;
    for (auto [t, src] : st.residual.entries())
      if (src == 1 || src == 2) left_desc.insert(t);
    const auto got = key_of(cross, [&](Loc v) { return left_desc.count(v) != 0; });
    const auto want = key_of({{1, 3}, {6, 8}, {6, 9}, {7, 8}, {7, 9}}, [](Loc v) { return v == 1 || v == 6 || v == 7; });
    iso = got == want;
  }
  return hits == 1 && iso;
}

bool c4(std::ostringstream& d) {
  std::mt19937 rng(g_seed);
  std::size_t checked = 0, bad = 0;
  for (int i = 0; i < 200; ++i) {
    DefEnv env;
    GenOptions opts;  // at most 4 components over {0, 1}
    auto s = flatten(random_process(rng, env, opts), env);
    auto r = diamond_check(s, env, ints({0, 1}), 4, true);
    checked += r.checked;
    bad += r.counterexamples.size();
  }
  d << "200 processes, " << checked << " steps checked, " << bad << " counterexamples";
  return bad == 0 && checked > 0;
}

bool c5(std::ostringstream& d) {
  auto m = parse_module(kInterleaving);
  GameConfig cfg;
  cfg.universe = ints({1, 2});
  auto p = flatten(m.process("L"), m.env), q = flatten(m.process("R"), m.env);
  auto w = weak_bisim(p, q, m.env, cfg);
  auto b = weak_barbed_bisim(p, q, m.env, cfg);
  const bool wok = w.verdict == Verdict::Distinguished && !w.witness.empty() && w.witness.front().size == 2 &&
                   w.witness.front().label == "{~f1, ~g2}";
  const bool bok = b.verdict == Verdict::Distinguished && b.barb &&
                   *b.barb == BarbSet{{"f", Polarity::Co}, {"g", Polarity::Co}};
  d << "weak " << to_string(w.verdict) << " " << (w.witness.empty() ? "-" : w.witness.front().label) << ", barbed "
    << to_string(b.verdict);
  return wok && bok;
}

bool c6(std::ostringstream& d) {
  std::mt19937 rng(g_seed + 1);
  int ok = 0;
  const int n = 50;
  for (int i = 0; i < n; ++i) {
    DefEnv env;
    GenOptions opts;
    opts.allow_recursion = true;
    auto p = flatten(random_process(rng, env, opts), env);
    auto q = pad(p, rng);
    GameConfig cfg;
    if (weak_bisim(p, q, env, cfg).verdict == Verdict::Bisimilar &&
        weak_barbed_bisim(p, q, env, cfg).verdict == Verdict::Bisimilar)
      ++ok;
  }
  d << ok << "/" << n << " bisimilar under both";
  return ok == n;
}

struct PairStats {
  int pairs = 0, agree = 0, bisimilar = 0, violations = 0;
};
PairStats g_pairs;

bool c7(std::ostringstream& d) {
  std::mt19937 rng(g_seed + 2);
  for (int i = 0; i < 40; ++i) {
    DefEnv env;
    GenOptions opts;
    opts.max_components = 3;
    auto t = random_process(rng, env, opts);
    auto u = rng() % 3 == 0 ? t : random_process(rng, env, opts);
    auto p = flatten(t, env), q = flatten(u, env);
    if (rng() % 4 == 0) q = pad(p, rng);
    GameConfig cfg;
    auto w = weak_bisim(p, q, env, cfg);
    auto s = stratified_bisim(p, q, env, cfg, 40);
    ++g_pairs.pairs;
    if (s.stabilized && s.verdict == w.verdict && w.verdict != Verdict::Inconclusive) ++g_pairs.agree;
    if (w.verdict == Verdict::Bisimilar) {
      ++g_pairs.bisimilar;
      if (weak_barbed_bisim(p, q, env, cfg).verdict != Verdict::Bisimilar) ++g_pairs.violations;
    }
  }
  d << g_pairs.agree << "/" << g_pairs.pairs << " agree";
  return g_pairs.agree == g_pairs.pairs;
}

bool c8(std::ostringstream& d) {
  // pairs from the previous criterion plus fresh mixed ones
  std::mt19937 rng(g_seed + 3);
  for (int i = 0; i < 40; ++i) {
    DefEnv env;
    GenOptions opts;
    opts.max_components = 3;
    opts.allow_recursion = true;
    auto p = flatten(random_process(rng, env, opts), env);
    auto q = rng() % 2 ? pad(p, rng) : flatten(random_process(rng, env, opts), env);
    GameConfig cfg;
    ++g_pairs.pairs;
    if (weak_bisim(p, q, env, cfg).verdict == Verdict::Bisimilar) {
      ++g_pairs.bisimilar;
      if (weak_barbed_bisim(p, q, env, cfg).verdict != Verdict::Bisimilar) ++g_pairs.violations;
    }
  }
  d << g_pairs.pairs << " pairs, " << g_pairs.bisimilar << " weakly bisimilar, " << g_pairs.violations
    << " violations";
  return g_pairs.violations == 0 && g_pairs.bisimilar > 0;
}

bool c9(std::ostringstream& d) {
  std::mt19937 rng(g_seed + 4);
  int tried = 0, reduced = 0;
  for (int i = 0; tried < 100 && i < 2000; ++i) {
    DefEnv env;
    auto a = random_automaton(rng, env);
    const auto q = a.states.front();
    auto t = random_recognized_tree(rng, a, q);
    if (!t || !recognizes(a, q, *t)) continue;
    ++tried;
    auto p = compose(automaton_to_process(a, q, env), tree_to_process(*t, Value::integer(1)), true, env);
    if (reduces_to_idle(flatten(p, env), env).found) ++reduced;
  }
  auto m = parse_module(kAutomaton);
  DefEnv env = m.env;
  const auto& a = m.automata.at("Fg");
  auto p = compose(automaton_to_process(a, "Q", env), tree_to_process(m.trees.at("t"), Value::integer(1)), true, env);
  const bool idle = reduces_to_idle(flatten(p, env), env).found;
  const bool rec = recognizes(a, "Q", m.trees.at("t"));
  d << reduced << "/" << tried << " recognized instances reduce; counterexample reduces " << idle << " recognized "
    << rec;
  return tried >= 100 && reduced == tried && idle && !rec;
}

bool c10(std::ostringstream& d) {
  bool all = true;
  for (int n = 0; n <= 3; ++n) {
    std::vector<Value> t;
    for (int i = 1; i <= n; ++i) t.push_back(Value::integer(i));
    auto sys = abp_system(t, 0);
    const std::multiset<std::string> want{"A", "0", to_string(term::constant("Succ", {expr::lit(Value::list(t))}))};
    auto exact = [&](const NetState& s) {
      std::multiset<std::string> got;
      for (const auto& [_, c] : s.comp)
        if (c->kind != Term::Kind::Idle) got.insert(to_string(c));
      return got == want;
    };
    auto space = reachable(sys.state, sys.env);
    bool plain = false;
    for (std::size_t i = 0; i < space.size(); ++i) plain |= exact(space.state(i));

    DefEnv env = sys.env;
    env.declare_symbol("h", 1);
    auto inert = parse_process("~h(1).(*) | h(x).(*)", env);
    auto with_q = flatten(compose(sys.term, inert, false, env), env);
    auto space_q = reachable(with_q, env);
    bool composed = false;
    for (std::size_t i = 0; i < space_q.size(); ++i) composed |= abp_delivered(space_q.state(i), t);
    d << "|t|=" << n << ":" << plain << composed << " ";
    all &= plain && composed && space.status == Status::Complete && space_q.status == Status::Complete;
  }
  return all;
}

bool check_context(const NetState& p, const NetState& q, const DefEnv& env, const GameConfig& cfg,
                   std::ostringstream& d) {
  auto c = distinguishing_context(p, q, env, cfg);
  const NetState& fixed = c.left_fixed ? p : q;
  const NetState& moving = c.left_fixed ? q : p;
  auto fr = parallel_with(fixed, c.context, c.env);
  auto derivs = reachable(moving, env);
  std::size_t separated = 0;
  for (std::size_t i = 0; i < derivs.size(); ++i) {
    auto mr = parallel_with(derivs.state(i), c.context, c.env);
    auto r = c.left_fixed ? weak_barbed_bisim(fr, mr, c.env, cfg) : weak_barbed_bisim(mr, fr, c.env, cfg);
    if (r.verdict == Verdict::Distinguished) ++separated;
  }
  d << separated << "/" << derivs.size() << " derivatives separated ";
  return c.verified && separated == derivs.size() && derivs.status == Status::Complete;
}

bool c11(std::ostringstream& d) {
  auto m = parse_module(kInterleaving);
  GameConfig cfg;
  cfg.universe = ints({1, 2});
  const bool a = check_context(flatten(m.process("L"), m.env), flatten(m.process("R"), m.env), m.env, cfg, d);
  GameConfig seven;
  seven.universe = ints({7});
  const bool b = check_context(flatten(m.process("O"), m.env), flatten(m.process("Z"), m.env), m.env, seven, d);
  return a && b;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strncmp(argv[i], "--seed=", 7) == 0) g_seed = static_cast<unsigned>(std::strtoul(argv[i] + 7, nullptr, 10));
  }
  std::cout << "seed " << g_seed << std::endl;
  criterion(1, "barbs of two parallel outputs", 1, c1);
  criterion(2, "transmitter loop and reachable set", 1, c2);
  criterion(3, "two-tau multi-step and its cross edges", 1, c3);
  criterion(4, "diamond property on generated processes", 60, c4);
  criterion(5, "parallel outputs are not their interleaving", 5, c5);
  criterion(6, "idle padding preserves both bisimilarities", 60, c6);
  criterion(7, "stratified verdict equals the fixpoint verdict", 120, c7);
  criterion(8, "weak bisimilarity implies barbed bisimilarity", 120, c8);
  criterion(9, "recognition implies reduction to idle, not conversely", 60, c9);
  criterion(10, "alternating bit protocol delivers", 60, c10);
  criterion(11, "distinguishing contexts are verified", 120, c11);
  std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criteria failed") << std::endl;
  return g_failures == 0 ? 0 : 1;
}
