// vccts: batch front end for parsing, reduction, transitions, equivalence checks and demos.
//
// Exit codes: 0 equal/success, 1 distinguished or not canonical, 2 inconclusive or truncated,
// 3 usage, parse or evaluation error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "vccts/encodings.hpp"
#include "vccts/equivalence.hpp"
#include "vccts/error.hpp"
#include "vccts/generators.hpp"
#include "vccts/json_io.hpp"
#include "vccts/parser.hpp"

using namespace vccts;

namespace {

constexpr int kEqual = 0;
constexpr int kDistinguished = 1;
constexpr int kInconclusive = 2;
constexpr int kUsage = 3;

struct Options {
  std::vector<std::string> files;
  std::string process;
  std::string universe = "0,1";
  std::size_t width = 0;  // 0: number of components
  std::size_t depth = 1000;
  std::size_t max_states = 20000;
  bool json = false;
  unsigned seed = 2024;
};

// Splits at commas outside brackets and parentheses.
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int nest = 0;
  for (char c : s) {
    if (c == '(' || c == '[') ++nest;
    if (c == ')' || c == ']') --nest;
    if (c == ',' && nest == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

std::vector<Value> parse_values(const std::string& s) {
  std::vector<Value> out;
  for (const auto& item : split_top(s)) out.push_back(parse_value(item));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Module load(const std::vector<std::string>& files) {
  Module m;
  for (const auto& f : files) parse_into(m, read_file(f));
  return m;
}

TermPtr pick(const Module& m, const std::string& name) {
  if (!name.empty()) return m.process(name);
  if (m.processes.empty()) throw Error("no process clause in the input");
  return m.processes.front().second;
}

GameConfig game_config(const Options& o) {
  GameConfig cfg;
  cfg.universe = parse_values(o.universe);
  if (cfg.universe.empty()) throw Error("empty value universe");
  cfg.max_width = o.width == 0 ? 2 : o.width;
  cfg.bounds = {o.max_states, o.depth};
  return cfg;
}

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

// ---- check

int cmd_check(const Options& o) {
  Json report = Json::array();
  bool bad = false;
  for (const auto& f : o.files) {
    Module m;
    parse_into(m, read_file(f));
    for (const auto& [name, c] : classify_definitions(m.env)) {
      report.push_back({{"file", f}, {"kind", "def"}, {"name", name}, {"class", to_string(c.cls)}, {"reason", c.reason}});
      bad |= !c.canonical();
    }
    for (const auto& [name, t] : m.processes) {
      Classification c;
      try {
        c = check_canonical(t, m.env);
      } catch (const SyntaxError& e) {
        c.reason = e.what();
      }
      report.push_back({{"file", f}, {"kind", "process"}, {"name", name}, {"class", to_string(c.cls)},
                        {"reason", c.reason}});
      bad |= !c.canonical();
    }
  }
  if (o.json) {
    print(report);
  } else {
    for (const auto& r : report) {
      std::cout << r["file"].get<std::string>() << ": " << r["kind"].get<std::string>() << " "
                << r["name"].get<std::string>() << " " << r["class"].get<std::string>();
      if (!r["reason"].get<std::string>().empty()) std::cout << " (" << r["reason"].get<std::string>() << ")";
      std::cout << "\n";
    }
  }
  return bad ? kDistinguished : kEqual;
}

// ---- reduce

int cmd_reduce(const Options& o, bool trace) {
  Module m = load(o.files);
  const NetState s = flatten(pick(m, o.process), m.env);
  const Bounds b{o.max_states, o.depth};
  const auto space = reachable(s, m.env, b);
  const auto idle = reduces_to_idle(s, m.env, b);
  if (o.json) {
    Json j = to_json(space);
    j["reduces_to_idle"] = idle.found;
    if (trace) {
      Json t = Json::array();
      for (std::size_t i = 0; i < idle.trace.size(); ++i) {
        t.push_back({{"state", to_json(idle.trace[i])}, {"step", i == 0 ? "" : idle.steps[i - 1]}});
      }
      j["trace"] = t;
    }
    print(j);
  } else {
    std::cout << "states " << space.size() << " (" << to_string(space.status) << ")\n";
    for (std::size_t i = 0; i < space.size(); ++i) {
      std::cout << "  [" << i << "] depth " << space.depth[i];
      if (i) std::cout << " from " << space.parent[i] << " by " << space.via[i];
      std::cout << "\n      " << to_string(space.state(i)) << "\n";
    }
    std::cout << "reduces to idle: " << (idle.found ? "yes" : "no") << "\n";
    if (trace && idle.found) {
      std::cout << "trace:\n  " << to_string(idle.trace.front()) << "\n";
      for (std::size_t i = 0; i < idle.steps.size(); ++i) {
        std::cout << "  --" << idle.steps[i] << "-->\n  " << to_string(idle.trace[i + 1]) << "\n";
      }
    }
  }
  return space.status == Status::Complete ? kEqual : kInconclusive;
}

// ---- lts

int cmd_lts(const Options& o) {
  Module m = load(o.files);
  const NetState s0 = flatten(pick(m, o.process), m.env);
  const auto universe = parse_values(o.universe);
  if (universe.empty()) throw Error("empty value universe");

  std::vector<NetState> states{s0};
  std::map<std::string, std::size_t> index{{state_key(s0, m.env), 0}};
  Json transitions = Json::array();
  bool truncated = false;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::size_t width = o.width == 0 ? std::max<std::size_t>(1, states[i].comp.size()) : o.width;
    for (const auto& step : multi_transitions(states[i], m.env, universe, width)) {
      auto key = state_key(step.target, m.env);
      auto it = index.find(key);
      if (it == index.end()) {
        if (states.size() >= o.max_states) {
          truncated = true;
          continue;
        }
        it = index.emplace(key, states.size()).first;
        states.push_back(step.target);
      }
      Json t = to_json(step);
      t.erase("target");
      t["source"] = i;
      t["target"] = it->second;
      transitions.push_back(std::move(t));
    }
  }
  if (o.json) {
    Json js = Json::array();
    for (const auto& s : states) js.push_back(to_json(s));
    print({{"status", truncated ? "truncated" : "complete"}, {"states", js}, {"transitions", transitions}});
  } else {
    std::cout << "states " << states.size() << (truncated ? " (truncated)" : "") << "\n";
    for (std::size_t i = 0; i < states.size(); ++i) std::cout << "  [" << i << "] " << to_string(states[i]) << "\n";
    std::cout << "transitions " << transitions.size() << "\n";
    for (const auto& t : transitions) {
      std::cout << "  " << t["source"].get<std::size_t>() << " --" << t["multiset"].get<std::string>() << "--> "
                << t["target"].get<std::size_t>() << "\n";
    }
  }
  return truncated ? kInconclusive : kEqual;
}

// ---- bisim

#ifndef VCCTS_DEMO_DIR
#define VCCTS_DEMO_DIR "demos"
#endif

// A file argument contributes its first new process; a bare name is looked up among the
// --file definitions, then as <name>.vccts in the demo directory.
TermPtr resolve(Module& m, const std::string& arg) {
  namespace fs = std::filesystem;
  auto from_file = [&](const std::string& path) {
    const std::size_t before = m.processes.size();
    parse_into(m, read_file(path));
    if (m.processes.size() == before) throw Error("'" + path + "' declares no process");
    return m.processes[before].second;
  };
  if (fs::is_regular_file(arg)) return from_file(arg);
  for (const auto& [name, t] : m.processes) {
    if (name == arg) return t;
  }
  const auto demo = fs::path(VCCTS_DEMO_DIR) / (arg + ".vccts");
  if (fs::is_regular_file(demo)) return from_file(demo.string());
  throw Error("unknown process or file '" + arg + "'");
}

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::Bisimilar: return kEqual;
    case Verdict::Distinguished: return kDistinguished;
    default: return kInconclusive;
  }
}

int cmd_bisim(const Options& o, const std::string& lhs, const std::string& rhs, const std::string& mode,
              std::size_t strata, bool context) {
  Module m = load(o.files);
  const TermPtr pt = resolve(m, lhs);
  const TermPtr qt = resolve(m, rhs);
  const NetState p = flatten(pt, m.env);
  const NetState q = flatten(qt, m.env);
  const GameConfig cfg = game_config(o);

  Json j;
  Verdict verdict = Verdict::Inconclusive;
  std::ostringstream text;
  if (mode == "barbed") {
    auto r = weak_barbed_bisim(p, q, m.env, cfg);
    verdict = r.verdict;
    j = to_json(r);
    text << "barbed: " << to_string(r.verdict) << "\n";
    if (!r.witness.empty()) text << "  " << r.witness << "\n";
    for (const auto& n : r.notes) text << "  note: " << n << "\n";
  } else if (mode == "weak") {
    auto r = weak_bisim(p, q, m.env, cfg);
    verdict = r.verdict;
    j = to_json(r);
    text << "weak: " << to_string(r.verdict) << " (" << r.triples << " triples)\n";
    for (const auto& w : r.witness) {
      text << "  " << (w.from_left ? "left" : "right") << " plays " << w.label << " from " << w.state << "\n";
    }
    for (const auto& n : r.notes) text << "  note: " << n << "\n";
  } else if (mode == "strata") {
    auto r = stratified_bisim(p, q, m.env, cfg, strata);
    verdict = r.verdict;
    j = to_json(r);
    text << "strata: " << to_string(r.verdict) << (r.stabilized ? " (stabilized)" : " (not stabilized)") << "\n  ";
    for (std::size_t k = 0; k < r.levels.size(); ++k) text << k << ":" << (r.levels[k] ? "in " : "out ");
    text << "\n";
    for (const auto& n : r.notes) text << "  note: " << n << "\n";
  } else {
    throw CLI::ValidationError("--mode", "expected barbed, weak or strata");
  }
  if (context && verdict == Verdict::Distinguished) {
    auto c = distinguishing_context(p, q, m.env, cfg);
    j["context"] = to_json(c);
    text << "context: " << to_string(c.context) << "\n  verified " << (c.verified ? "yes" : "no") << " on "
         << c.derivatives << " derivatives\n";
  }
  if (o.json) print(j);
  else std::cout << text.str();
  return exit_for(verdict);
}

// ---- demos

int demo_abp(const Options& o, const std::string& messages, int bit, const std::string& inert, bool verbatim) {
  const auto t = parse_values(messages);
  auto sys = abp_system(t, bit, verbatim ? AbpVariant::Verbatim : AbpVariant::Repaired);
  NetState s = sys.state;
  if (!inert.empty()) {
    auto q = parse_process(inert, sys.env);
    s = flatten(compose(sys.term, q, false, sys.env), sys.env);
  }
  const auto space = reachable(s, sys.env, {o.max_states, o.depth});
  std::optional<std::size_t> hit;
  for (std::size_t i = 0; i < space.size() && !hit; ++i) {
    if (abp_delivered(space.state(i), t)) hit = i;
  }
  if (o.json) {
    Json j = {{"messages", Value::list(t).str()}, {"states", space.size()}, {"status", to_string(space.status)},
              {"delivered", hit.has_value()}};
    if (hit) {
      Json tr = Json::array();
      for (auto i : space.path_to(*hit)) tr.push_back({{"via", space.via[i]}, {"state", to_json(space.state(i))}});
      j["trace"] = tr;
    }
    print(j);
  } else {
    std::cout << "reachable states " << space.size() << " (" << to_string(space.status) << ")\n";
    if (hit) {
      std::cout << "Succ(" << Value::list(t).str() << ") reached:\n";
      for (auto i : space.path_to(*hit)) {
        if (i) std::cout << "  --" << space.via[i] << "-->\n";
        std::cout << "  " << to_string(space.state(i)) << "\n";
      }
    } else {
      std::cout << "no delivered state found\n";
    }
  }
  if (hit) return kEqual;
  return space.status == Status::Complete ? kDistinguished : kInconclusive;
}

const char* kTreeDemo = R"(symbol f/2, g1/2, g2/2;
automaton Fg {
  states Q, Q1, Q2, Q11, Q12, Q21, Q22;
  Q: f(x) -> (Q1, Q2);
  Q1: g1(x) -> (Q11, Q12);
  Q2: g2(x) -> (Q21, Q22);
}
tree t = f(x).(g1(x).(g2(x).(*, *), *), *);
)";

int demo_tree(const Options& o, std::size_t samples) {
  Module m = o.files.empty() ? parse_module(kTreeDemo) : load(o.files);
  if (m.automata.empty() || m.trees.empty()) throw Error("the input needs an automaton and a tree");
  const auto& a = m.automata.begin()->second;
  const auto& [tname, tree] = *m.trees.begin();
  const std::string q = a.states.front();
  DefEnv env = m.env;
  const auto enc = automaton_to_process(a, q, env);
  const auto composed = compose(enc, tree_to_process(tree, Value::integer(1)), true, env);
  const auto search = reduces_to_idle(flatten(composed, env), env, {o.max_states, o.depth});
  const bool rec = recognizes(a, q, tree);

  std::size_t agree = 0, tried = 0;
  std::mt19937 rng(o.seed);
  while (tried < samples) {
    DefEnv genv;
    auto ra = random_automaton(rng, genv);
    auto rt = random_recognized_tree(rng, ra, ra.states.front());
    if (!rt) continue;
    ++tried;
    auto p = compose(automaton_to_process(ra, ra.states.front(), genv), tree_to_process(*rt, Value::integer(0)),
                     true, genv);
    if (reduces_to_idle(flatten(p, genv), genv).found) ++agree;
  }

  if (o.json) {
    Json j = {{"automaton", a.name}, {"state", q}, {"tree", to_string(tree)}, {"recognizes", rec},
              {"reduces_to_idle", search.found}, {"steps", search.steps}};
    if (samples) j["samples"] = {{"seed", o.seed}, {"tried", tried}, {"reduced", agree}};
    print(j);
  } else {
    std::cout << "automaton " << a.name << " at " << q << ", tree " << tname << " = " << to_string(tree) << "\n";
    std::cout << "recognizes: " << (rec ? "yes" : "no") << "\nreduces to idle: " << (search.found ? "yes" : "no")
              << "\n";
    for (std::size_t i = 0; i < search.trace.size(); ++i) {
      if (i) std::cout << "  --" << search.steps[i - 1] << "-->\n";
      std::cout << "  " << to_string(search.trace[i]) << "\n";
    }
    if (samples) {
      std::cout << "random recognized instances (seed " << o.seed << "): " << agree << "/" << tried
                << " reduce to idle\n";
    }
  }
  return agree == tried ? kEqual : kDistinguished;
}

const char* kExpansionDemo = R"(symbol f/1, g/1;
process lhs = ~f(1).(0) | ~g(2).(0);
process rhs = ~f(1).(~g(2).(0)) + ~g(2).(~f(1).(0));
)";

int demo_expansion(const Options& o) {
  Module m = parse_module(kExpansionDemo);
  const NetState p = flatten(m.process("lhs"), m.env);
  const NetState q = flatten(m.process("rhs"), m.env);
  const GameConfig cfg = game_config(o);
  const auto weak = weak_bisim(p, q, m.env, cfg);
  const auto barbed = weak_barbed_bisim(p, q, m.env, cfg);
  const auto ctx = distinguishing_context(p, q, m.env, cfg);
  if (o.json) {
    print({{"lhs", to_json(p)}, {"rhs", to_json(q)}, {"weak", to_json(weak)}, {"barbed", to_json(barbed)},
           {"context", to_json(ctx)}});
  } else {
    std::cout << "lhs " << to_string(p) << "\nrhs " << to_string(q) << "\n";
    std::cout << "weak: " << to_string(weak.verdict) << "\n";
    for (const auto& w : weak.witness) {
      std::cout << "  " << (w.from_left ? "left" : "right") << " plays " << w.label << " from " << w.state << "\n";
    }
    std::cout << "barbed: " << to_string(barbed.verdict) << "\n  " << barbed.witness << "\n";
    std::cout << "context: " << to_string(ctx.context) << "\n  verified " << (ctx.verified ? "yes" : "no") << "\n";
  }
  const bool ok = weak.verdict == Verdict::Distinguished && barbed.verdict == Verdict::Distinguished && ctx.verified;
  return ok ? kEqual : kDistinguished;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for value-passing CCS on trees"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool lts_flags) {
    sub->add_option("--max-states", o.max_states, "state budget")->check(CLI::PositiveNumber);
    sub->add_option("--depth,--max-depth", o.depth, "depth budget")->check(CLI::PositiveNumber);
    sub->add_flag("--json", o.json, "machine-readable output");
    sub->add_option("--seed", o.seed, "seed for randomized parts");
    if (lts_flags) {
      sub->add_option("--universe", o.universe, "comma-separated input values");
      sub->add_option("--width", o.width, "largest multi-step (0: number of components)");
    }
  };

  auto* check = app.add_subcommand("check", "classify definitions and processes");
  check->add_option("files", o.files, "definition files")->required()->check(CLI::ExistingFile);
  check->add_flag("--json", o.json, "machine-readable output");

  bool trace = false;
  auto* reduce = app.add_subcommand("reduce", "explore internal reductions");
  reduce->add_option("files", o.files)->required()->check(CLI::ExistingFile);
  reduce->add_option("--process", o.process, "process name (default: first)");
  reduce->add_flag("--trace", trace, "print a trace to an idle state");
  common(reduce, false);

  auto* lts = app.add_subcommand("lts", "dump the located transition system");
  lts->add_option("files", o.files)->required()->check(CLI::ExistingFile);
  lts->add_option("--process", o.process, "process name (default: first)");
  common(lts, true);

  std::string lhs, rhs, mode = "weak";
  std::size_t strata = 8;
  bool context = false;
  auto* bisim = app.add_subcommand("bisim", "compare two processes");
  bisim->add_option("P", lhs, "process name or file")->required();
  bisim->add_option("Q", rhs, "process name or file")->required();
  bisim->add_option("--file", o.files, "definition files for process names")->check(CLI::ExistingFile);
  bisim->add_option("--mode", mode, "barbed, weak or strata")
      ->check(CLI::IsMember({"barbed", "weak", "strata"}));
  bisim->add_option("--strata", strata, "approximant count for strata mode");
  bisim->add_flag("--context", context, "build a distinguishing context when the pair is distinguished");
  common(bisim, true);

  auto* demo = app.add_subcommand("demo", "worked constructions");
  demo->require_subcommand(1);
  std::string messages = "1,2", inert;
  int bit = 0;
  bool verbatim = false;
  auto* abp = demo->add_subcommand("abp", "alternating bit protocol delivery");
  abp->add_option("--messages", messages, "comma-separated messages");
  abp->add_option("--bit", bit, "initial bit")->check(CLI::Range(0, 1));
  abp->add_option("--inert", inert, "process composed alongside with no links");
  abp->add_flag("--verbatim", verbatim, "use the receiver without the final acknowledgement");
  common(abp, false);
  std::size_t samples = 0;
  auto* tree = demo->add_subcommand("tree-automaton", "recognition by reduction");
  tree->add_option("--file", o.files, "file with an automaton and a tree")->check(CLI::ExistingFile);
  tree->add_option("--samples", samples, "random recognized instances to check");
  common(tree, false);
  auto* expansion = demo->add_subcommand("expansion-law", "parallel outputs against their interleaving");
  common(expansion, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*check) return cmd_check(o);
    if (*reduce) return cmd_reduce(o, trace);
    if (*lts) return cmd_lts(o);
    if (*bisim) return cmd_bisim(o, lhs, rhs, mode, strata, context);
    if (*abp) return demo_abp(o, messages, bit, inert, verbatim);
    if (*tree) return demo_tree(o, samples);
    if (*expansion) return demo_expansion(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
