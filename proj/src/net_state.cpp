#include "vccts/net_state.hpp"

#include <algorithm>
#include <functional>

#include "vccts/error.hpp"

namespace vccts {

const TermPtr& NetState::at(Loc p) const {
  auto it = comp.find(p);
  if (it == comp.end()) throw GraphError("no component at location " + std::to_string(p));
  return it->second;
}

namespace {

using Sigma = std::map<std::string, std::string>;

std::string apply(const Sigma& sigma, const std::string& name) {
  auto it = sigma.find(name);
  return it == sigma.end() ? name : it->second;
}

// sigma . rho: names in the scope of rho resolved through rho first.
Sigma compose_sigma(const Sigma& sigma, const Sigma& rho) {
  Sigma out = sigma;
  for (const auto& [from, to] : rho) out[from] = apply(sigma, to);
  return out;
}

ExprPtr fold_safely(const ExprPtr& e) {
  try {
    return fold_closed(e);
  } catch (const EvalError&) {
    return e;  // the error resurfaces if the expression is ever evaluated
  }
}

constexpr int kUnfoldFuel = 10000;

void collect_heads(const TermPtr& t, const Sigma& sigma, const DefEnv& env, int& fuel, HeadForm& out) {
  using K = Term::Kind;
  switch (t->kind) {
    case K::Idle: {
      Head h;
      h.kind = Head::Kind::Idle;
      h.index = out.size();
      out.push_back(std::move(h));
      return;
    }
    case K::Nil: {
      Head h;
      h.kind = Head::Kind::Nil;
      h.index = out.size();
      out.push_back(std::move(h));
      return;
    }
    case K::Input:
    case K::Output: {
      Head h;
      h.kind = t->kind == K::Input ? Head::Kind::Input : Head::Kind::Output;
      h.symbol = apply(sigma, t->name);
      h.var = t->var;
      if (t->kind == K::Output) h.value = eval_expr(*t->expr);
      for (const auto& c : t->children) h.children.push_back(term::rename(c, sigma));
      h.index = out.size();
      out.push_back(std::move(h));
      return;
    }
    case K::Sum:
      collect_heads(t->children[0], sigma, env, fuel, out);
      collect_heads(t->children[1], sigma, env, fuel, out);
      return;
    case K::Cond:
      collect_heads(eval_bexpr(*t->expr) ? t->children[0] : t->children[1], sigma, env, fuel, out);
      return;
    case K::Const:
      if (--fuel < 0) throw GuardError("unguarded recursion while unfolding '" + t->name + "'");
      collect_heads(unfold_constant(*t, env), sigma, env, fuel, out);
      return;
    case K::Rename:
      collect_heads(t->children[0], compose_sigma(sigma, t->renaming), env, fuel, out);
      return;
    case K::Graph:
    case K::Restrict:
    case K::ProcVar:
      throw SyntaxError("not a recursive canonical guarded sum: " + to_string(t));
  }
}

}  // namespace

HeadForm cs_head(const TermPtr& s, const DefEnv& env) {
  HeadForm out;
  int fuel = kUnfoldFuel;
  collect_heads(s, {}, env, fuel, out);
  return out;
}

TermPtr normalize_component(const TermPtr& t) {
  using K = Term::Kind;
  if (t->kind == K::Cond && is_closed(*t->expr)) {
    try {
      return normalize_component(eval_bexpr(*t->expr) ? t->children[0] : t->children[1]);
    } catch (const EvalError&) {
      // keep the conditional; cs(.) will report the error if it is reached
    }
  }
  bool changed = false;
  auto copy = std::make_shared<Term>(*t);
  if (copy->expr && t->kind == K::Output) {
    copy->expr = fold_safely(t->expr);
    changed = copy->expr != t->expr;
  }
  for (auto& a : copy->args) {
    auto n = fold_safely(a);
    changed = changed || n != a;
    a = std::move(n);
  }
  for (auto& c : copy->children) {
    auto n = normalize_component(c);
    changed = changed || n != c;
    c = std::move(n);
  }
  if (!changed) return t;
  if (copy->kind == K::Rename) return term::rename(copy->children[0], copy->renaming);
  return copy;
}

// ---------------------------------------------------------------------------
// Flattening

namespace {

std::string fresh_symbol(const std::string& name, const std::set<std::string>& used) {
  const std::string base = base_symbol(name);
  for (int k = 1;; ++k) {
    std::string candidate = base + "'" + std::to_string(k);
    if (!used.count(candidate)) return candidate;
  }
}

// Is this term, once constants are unfolded, a graph-level process rather than a guarded sum?
bool is_graph_level(const TermPtr& t, const DefEnv& env) {
  const Term* cur = t.get();
  for (int fuel = kUnfoldFuel; fuel > 0; --fuel) {
    switch (cur->kind) {
      case Term::Kind::Graph:
      case Term::Kind::Restrict: return true;
      case Term::Kind::Rename: cur = cur->children[0].get(); break;
      case Term::Kind::Const: cur = env.lookup(cur->name).body.get(); break;
      default: return false;
    }
  }
  throw GuardError("unguarded recursion through constant bodies");
}

struct Flattener {
  NetState& st;
  const DefEnv& env;
  Loc& next;
  std::set<std::string>& used;

  // Returns the locations created for t.
  std::vector<Loc> run(const TermPtr& t, const Sigma& sigma) {
    using K = Term::Kind;
    switch (t->kind) {
      case K::Graph: {
        std::vector<Loc> locs;
        for (const auto& c : t->children) locs.push_back(component(c, sigma));
        for (auto [a, b] : t->edges) st.graph.add_edge(locs[a], locs[b]);
        return locs;
      }
      case K::Restrict: {
        Sigma inner = sigma;
        for (const auto& s : t->symbols) {
          std::string chosen = used.count(s) ? fresh_symbol(s, used) : s;
          used.insert(chosen);
          st.restricted.insert(chosen);
          inner[s] = chosen;
        }
        return run(t->children[0], inner);
      }
      case K::Rename: return run(t->children[0], compose_sigma(sigma, t->renaming));
      case K::Const:
        if (is_graph_level(t, env)) return run(unfold_constant(*t, env), sigma);
        return {component(t, sigma)};
      case K::ProcVar: throw SyntaxError("process variable '" + t->name + "' in a runtime state");
      default: return {component(t, sigma)};
    }
  }

  Loc component(const TermPtr& t, const Sigma& sigma) {
    if (t->kind == Term::Kind::Graph || t->kind == Term::Kind::Restrict) {
      throw SyntaxError("graph component is not a guarded sum: " + to_string(t));
    }
    Sigma effective;
    for (const auto& [from, to] : sigma) {
      if (from != to) effective[from] = to;
    }
    const Loc p = next++;
    st.graph.add_vertex(p);
    st.comp[p] = normalize_component(term::rename(t, effective));
    return p;
  }
};

}  // namespace

std::vector<Loc> flatten_into(NetState& state, const TermPtr& term, const DefEnv& env, Loc& next_loc,
                              std::set<std::string>& used) {
  Flattener f{state, env, next_loc, used};
  return f.run(term, {});
}

NetState flatten(const TermPtr& term, const DefEnv& env) {
  const auto cls = check_canonical(term, env);
  if (!cls.canonical()) throw SyntaxError("not a canonical process: " + cls.reason);
  const auto fv = free_data_vars(term);
  if (!fv.empty()) throw EvalError("process has free data variable '" + *fv.begin() + "'");
  NetState st;
  Loc next = 1;
  std::set<std::string> used = sort_of(term, env);
  flatten_into(st, term, env, next, used);
  collect_restrictions(st, env);
  return st;
}

std::vector<Loc> attach(NetState& state, const TermPtr& term, const DefEnv& env, bool complete) {
  const auto cls = check_canonical(term, env);
  if (!cls.canonical()) throw SyntaxError("not a canonical process: " + cls.reason);
  const auto fv = free_data_vars(term);
  if (!fv.empty()) throw EvalError("process has free data variable '" + *fv.begin() + "'");
  const auto old = state.locations();
  Loc next = state.graph.max_vertex() + 1;
  std::set<std::string> used = state_names(state, env);
  auto extra = sort_of(term, env);
  used.insert(extra.begin(), extra.end());
  auto fresh = flatten_into(state, term, env, next, used);
  if (complete) {
    for (Loc p : old) {
      for (Loc q : fresh) state.graph.add_edge(p, q);
    }
  }
  collect_restrictions(state, env);
  return fresh;
}

std::set<std::string> state_names(const NetState& state, const DefEnv& env) {
  std::set<std::string> out = state.restricted;
  for (const auto& [_, c] : state.comp) {
    auto s = sort_of(c, env);
    out.insert(s.begin(), s.end());
  }
  return out;
}

void collect_restrictions(NetState& state, const DefEnv& env) {
  std::set<std::string> mentioned;
  for (const auto& [_, c] : state.comp) {
    auto s = sort_of(c, env);
    mentioned.insert(s.begin(), s.end());
  }
  for (auto it = state.restricted.begin(); it != state.restricted.end();) {
    it = mentioned.count(*it) ? std::next(it) : state.restricted.erase(it);
  }
}

Firing fire(const NetState& source, const std::map<Loc, std::vector<TermPtr>>& replacements,
            const DefEnv& env) {
  Firing out;
  out.target = source;
  Loc next = source.graph.max_vertex() + 1;
  std::set<std::string> used = state_names(source, env);
  std::map<Loc, std::vector<Loc>> family;
  for (const auto& [p, kids] : replacements) {
    if (!source.graph.has_vertex(p)) throw GraphError("firing location " + std::to_string(p) + " not in state");
    auto& sets = out.children[p];
    for (const auto& k : kids) {
      auto locs = flatten_into(out.target, k, env, next, used);
      family[p].insert(family[p].end(), locs.begin(), locs.end());
      sets.push_back(std::move(locs));
    }
  }
  for (const auto& [p, kids] : family) {
    for (Loc q : source.graph.neighbors(p)) {
      auto fq = family.find(q);
      for (Loc c : kids) {
        if (fq == family.end()) {
          out.target.graph.add_edge(c, q);
        } else {
          for (Loc d : fq->second) out.target.graph.add_edge(c, d);
        }
      }
    }
  }
  for (const auto& [p, _] : replacements) {
    out.target.graph.remove_vertex(p);
    out.target.comp.erase(p);
  }
  std::map<Loc, Loc> lambda;
  for (Loc v : out.target.graph.vertices()) lambda[v] = v;
  for (const auto& [p, kids] : family) {
    for (Loc c : kids) lambda[c] = p;
  }
  out.residual = ResidualMap(std::move(lambda));
  collect_restrictions(out.target, env);
  return out;
}

// ---------------------------------------------------------------------------
// Barbs

BarbSet barbs_of_component(const TermPtr& s, const DefEnv& env) {
  BarbSet out;
  for (const auto& h : cs_head(s, env)) {
    if (h.kind == Head::Kind::Input) out.insert({h.symbol, Polarity::Plain});
    if (h.kind == Head::Kind::Output) out.insert({h.symbol, Polarity::Co});
  }
  return out;
}

std::vector<BarbSet> barb_signature(const NetState& state, const DefEnv& env) {
  std::vector<BarbSet> out;
  for (const auto& [_, c] : state.comp) {
    BarbSet b;
    for (const auto& x : barbs_of_component(c, env)) {
      if (!state.restricted.count(x.name)) b.insert(x);
    }
    out.push_back(std::move(b));
  }
  return out;
}

namespace {
bool augment(std::size_t u, const std::vector<std::vector<std::size_t>>& adj, std::vector<int>& match,
             std::vector<bool>& seen) {
  for (std::size_t v : adj[u]) {
    if (seen[v]) continue;
    seen[v] = true;
    if (match[v] < 0 || augment(static_cast<std::size_t>(match[v]), adj, match, seen)) {
      match[v] = static_cast<int>(u);
      return true;
    }
  }
  return false;
}
}  // namespace

bool has_barb(const NetState& state, const BarbSet& b, const DefEnv& env) {
  const auto sig = barb_signature(state, env);
  std::vector<std::vector<std::size_t>> adj;
  for (const auto& x : b) {
    std::vector<std::size_t> row;
    for (std::size_t q = 0; q < sig.size(); ++q) {
      if (sig[q].count(x)) row.push_back(q);
    }
    if (row.empty()) return false;
    adj.push_back(std::move(row));
  }
  std::vector<int> match(sig.size(), -1);
  for (std::size_t u = 0; u < adj.size(); ++u) {
    std::vector<bool> seen(sig.size(), false);
    if (!augment(u, adj, match, seen)) return false;
  }
  return true;
}

std::set<BarbSet> satisfiable_barb_sets(const NetState& state, const DefEnv& env) {
  std::set<BarbSet> sets{BarbSet{}};
  for (const auto& family : barb_signature(state, env)) {
    std::set<BarbSet> grown = sets;
    for (const auto& s : sets) {
      for (const auto& x : family) {
        if (s.count(x)) continue;
        auto t = s;
        t.insert(x);
        grown.insert(std::move(t));
      }
    }
    sets = std::move(grown);
  }
  return sets;
}

bool is_idle(const NetState& state, const DefEnv& env) {
  for (const auto& [_, c] : state.comp) {
    const auto heads = cs_head(c, env);
    if (heads.empty()) return false;
    for (const auto& h : heads) {
      if (h.kind != Head::Kind::Idle) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Canonical identity

std::string component_fingerprint(const TermPtr& s, const std::set<std::string>& restricted,
                                  std::vector<std::string>* order) {
  std::vector<std::string> seen;
  auto text = to_string(s, [&](const std::string& name) -> std::string {
    if (!restricted.count(name)) return name;
    auto it = std::find(seen.begin(), seen.end(), name);
    if (it == seen.end()) {
      seen.push_back(name);
      it = seen.end() - 1;
    }
    return "?" + std::to_string(it - seen.begin());
  });
  if (order) *order = std::move(seen);
  return text;
}

namespace {

// Restricted names a component refers to only through constant bodies: (definition name, state name).
void implicit_refs(const Term& t, const Sigma& sigma, const DefEnv& env, const std::set<std::string>& restricted,
                   std::set<std::pair<std::string, std::string>>& out) {
  switch (t.kind) {
    case Term::Kind::Const:
      for (const auto& n : env.constant_sort(t.name)) {
        const std::string target = apply(sigma, n);
        if (!target.empty() && restricted.count(target)) out.emplace("=" + n, target);
      }
      break;
    case Term::Kind::Rename:
      implicit_refs(*t.children[0], compose_sigma(sigma, t.renaming), env, restricted, out);
      return;
    case Term::Kind::Restrict: {
      Sigma inner = sigma;
      for (const auto& s : t.symbols) inner[s] = "";
      implicit_refs(*t.children[0], inner, env, restricted, out);
      return;
    }
    default: break;
  }
  for (const auto& c : t.children) implicit_refs(*c, sigma, env, restricted, out);
}

}  // namespace

CanonicalState canonicalize(const NetState& state, const DefEnv& env, const std::map<Loc, std::string>* extra) {
  ColoredGraph cg;
  const auto locs = state.locations();
  std::map<Loc, std::size_t> loc_node;
  std::map<std::string, std::size_t> sym_node;
  std::map<std::pair<std::size_t, std::size_t>, std::set<std::string>> labels;

  std::map<Loc, std::vector<std::string>> uses;
  for (Loc p : locs) {
    std::string color = "L:" + component_fingerprint(state.at(p), state.restricted, &uses[p]);
    if (extra) {
      auto it = extra->find(p);
      if (it != extra->end()) color += "@" + it->second;
    }
    loc_node[p] = cg.add_vertex(std::move(color));
  }
  for (const auto& r : state.restricted) sym_node[r] = cg.add_vertex("S");
  for (Loc p : locs) {
    const auto& order = uses[p];
    for (std::size_t k = 0; k < order.size(); ++k) {
      labels[{loc_node[p], sym_node.at(order[k])}].insert(std::to_string(k));
    }
    std::set<std::pair<std::string, std::string>> refs;
    implicit_refs(*state.at(p), {}, env, state.restricted, refs);
    for (const auto& [label, target] : refs) labels[{loc_node[p], sym_node.at(target)}].insert(label);
  }
  for (auto [p, q] : state.graph.edges()) cg.add_edge(loc_node[p], loc_node[q], "e");
  for (const auto& [nodes, ls] : labels) {
    std::string joined;
    for (const auto& l : ls) joined += (joined.empty() ? "" : ",") + l;
    cg.add_edge(nodes.first, nodes.second, joined);
  }

  const auto form = canonical_form(cg);
  std::map<std::size_t, Loc> node_loc;
  for (const auto& [p, n] : loc_node) node_loc[n] = p;
  CanonicalState out;
  out.key = form.key;
  Loc next = 0;
  for (std::size_t n : form.order) {
    auto it = node_loc.find(n);
    if (it != node_loc.end()) out.relabel[it->second] = next++;
  }
  for (Loc p : locs) {
    out.state.graph.add_vertex(out.relabel[p]);
    out.state.comp[out.relabel[p]] = state.at(p);
  }
  for (auto [p, q] : state.graph.edges()) out.state.graph.add_edge(out.relabel[p], out.relabel[q]);
  out.state.restricted = state.restricted;
  return out;
}

std::string state_key(const NetState& state, const DefEnv& env, const std::map<Loc, std::string>* extra) {
  return canonicalize(state, env, extra).key;
}

std::string to_string(const NetState& state) {
  std::string out = "{";
  bool first = true;
  for (const auto& [p, c] : state.comp) {
    out += (first ? "" : "; ") + std::to_string(p) + ": " + to_string(c);
    first = false;
  }
  const auto edges = state.graph.edges();
  if (!edges.empty()) {
    out += " | edges";
    for (auto [p, q] : edges) out += " " + std::to_string(p) + "--" + std::to_string(q);
  }
  if (!state.restricted.empty()) {
    out += " | restrict";
    for (const auto& r : state.restricted) out += " " + r;
  }
  return out + "}";
}

}  // namespace vccts
