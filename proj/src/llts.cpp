#include "vccts/llts.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "vccts/error.hpp"

namespace vccts {

Action Action::dual() const {
  Action a = *this;
  a.polarity = polarity == Polarity::Plain ? Polarity::Co : Polarity::Plain;
  return a;
}

std::string Action::str() const { return (polarity == Polarity::Co ? "~" : "") + symbol + value.str(); }

std::string TransLabel::str() const {
  if (tau) return "tau";
  std::string out = std::to_string(loc) + ":" + action.str() + "(";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i) out += ",";
    out += "{";
    for (std::size_t j = 0; j < sets[i].size(); ++j) out += (j ? "," : "") + std::to_string(sets[i][j]);
    out += "}";
  }
  return out + ")";
}

LabelMultiset::LabelMultiset(std::vector<TransLabel> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
}

std::size_t LabelMultiset::count(const TransLabel& l) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), l));
}

std::size_t LabelMultiset::tau_count() const {
  return static_cast<std::size_t>(
      std::count_if(labels_.begin(), labels_.end(), [](const TransLabel& l) { return l.tau; }));
}

std::vector<Action> LabelMultiset::visible_actions() const {
  std::vector<Action> out;
  for (const auto& l : labels_) {
    if (!l.tau) out.push_back(l.action);
  }
  std::sort(out.begin(), out.end());
  return out;
}

LabelMultiset LabelMultiset::unite(const LabelMultiset& other) const {
  auto all = labels_;
  all.insert(all.end(), other.labels_.begin(), other.labels_.end());
  return LabelMultiset(std::move(all));
}

LabelMultiset LabelMultiset::difference(const LabelMultiset& other) const {
  std::vector<TransLabel> out;
  std::map<TransLabel, std::size_t> remove;
  for (const auto& l : other.labels_) ++remove[l];
  for (const auto& l : labels_) {
    auto it = remove.find(l);
    if (it != remove.end() && it->second > 0) {
      --it->second;
      continue;
    }
    out.push_back(l);
  }
  return LabelMultiset(std::move(out));
}

std::string LabelMultiset::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < labels_.size(); ++i) out += (i ? ", " : "") + labels_[i].str();
  return out + "}";
}

bool punrel(const LabelMultiset& delta) {
  const auto& ls = delta.labels();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    for (std::size_t j = i + 1; j < ls.size(); ++j) {
      const auto& a = ls[i];
      const auto& b = ls[j];
      if (a.tau || b.tau || a.loc == b.loc) continue;
      if (a.action.symbol == b.action.symbol) return false;
    }
  }
  return true;
}

std::vector<LocPair> LabeledStep::cross_edges(const std::set<Loc>& left) const {
  std::vector<LocPair> out;
  for (auto [a, b] : target.graph.edges()) {
    const bool la = left.count(residual(a)) != 0;
    const bool lb = left.count(residual(b)) != 0;
    if (la && !lb) out.emplace_back(a, b);
    if (lb && !la) out.emplace_back(b, a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct Heads {
  std::map<Loc, HeadForm> at;

  Heads(const NetState& s, const DefEnv& env) {
    for (const auto& [p, c] : s.comp) at[p] = cs_head(c, env);
  }

  const Head* find(const Choice& c) const {
    auto it = at.find(c.loc);
    if (it == at.end() || c.summand >= it->second.size()) return nullptr;
    return &it->second[c.summand];
  }

  Action action(const Choice& c) const {
    const Head& h = *find(c);
    return {h.symbol, h.kind == Head::Kind::Input ? Polarity::Plain : Polarity::Co,
            h.kind == Head::Kind::Input ? c.value : h.value};
  }
};

bool contains(const std::vector<Value>& universe, const Value& v) {
  return std::find(universe.begin(), universe.end(), v) != universe.end();
}

LabeledStep build(const NetState& state, const DefEnv& env, const Heads& heads, const std::vector<Group>& groups) {
  std::map<Loc, std::vector<TermPtr>> repl;
  for (const auto& g : groups) {
    for (const auto& c : g) {
      const Head& h = *heads.find(c);
      auto& kids = repl[c.loc];
      if (h.kind == Head::Kind::Input) {
        for (const auto& k : h.children) kids.push_back(subst_value(k, h.var, c.value));
      } else {
        kids = h.children;
      }
    }
  }
  auto fired = fire(state, repl, env);
  std::vector<TransLabel> labels;
  for (const auto& g : groups) {
    if (g.size() == 2) {
      labels.push_back(TransLabel::silent());
      continue;
    }
    TransLabel l;
    l.tau = false;
    l.loc = g[0].loc;
    l.action = heads.action(g[0]);
    l.sets = fired.children[g[0].loc];
    labels.push_back(std::move(l));
  }
  LabeledStep s;
  s.target = std::move(fired.target);
  s.residual = std::move(fired.residual);
  s.labels = LabelMultiset(std::move(labels));
  s.groups = groups;
  return s;
}

// Enumerates every legal family of groups: each location fires at most once, taus pair adjacent
// dual heads with equal values, and the visible labels are pairwise unrelated with no
// adjacent dual pair left uncollapsed.
void enumerate(const NetState& state, const Heads& heads, const std::vector<Value>& universe,
               std::size_t max_width, const std::function<void(const std::vector<Group>&)>& emit) {
  const auto locs = state.locations();
  std::map<Loc, std::vector<Choice>> visible;
  std::map<Loc, std::vector<Group>> pairs;  // keyed by the smaller location
  for (Loc p : locs) {
    for (const auto& h : heads.at.at(p)) {
      if (h.kind != Head::Kind::Input && h.kind != Head::Kind::Output) continue;
      if (state.restricted.count(h.symbol)) continue;
      if (h.kind == Head::Kind::Input) {
        for (const auto& v : universe) visible[p].push_back({p, h.index, v});
      } else {
        visible[p].push_back({p, h.index, h.value});
      }
    }
    for (Loc q : state.graph.neighbors(p)) {
      for (const auto& in : heads.at.at(p)) {
        if (in.kind != Head::Kind::Input) continue;
        for (const auto& o : heads.at.at(q)) {
          if (o.kind != Head::Kind::Output || o.symbol != in.symbol) continue;
          pairs[std::min(p, q)].push_back({{p, in.index, o.value}, {q, o.index, o.value}});
        }
      }
    }
  }

  std::vector<Group> groups;
  std::set<Loc> busy;
  auto finish = [&]() {
    // visible labels of the resulting multiset must carry distinct symbols, either polarity
    std::set<std::string> seen;
    for (const auto& g : groups) {
      if (g.size() == 1 && !seen.insert(heads.action(g[0]).symbol).second) return;
    }
    emit(groups);
  };
  std::function<void(std::size_t)> dfs = [&](std::size_t i) {
    if (i == locs.size()) {
      if (!groups.empty()) finish();
      return;
    }
    const Loc p = locs[i];
    dfs(i + 1);
    if (busy.count(p) || groups.size() >= max_width) return;
    busy.insert(p);
    for (const auto& c : visible[p]) {
      groups.push_back({c});
      dfs(i + 1);
      groups.pop_back();
    }
    for (const auto& g : pairs[p]) {
      const Loc other = g[0].loc == p ? g[1].loc : g[0].loc;
      if (busy.count(other)) continue;
      busy.insert(other);
      groups.push_back(g);
      dfs(i + 1);
      groups.pop_back();
      busy.erase(other);
    }
    busy.erase(p);
  };
  dfs(0);
}

}  // namespace

std::vector<LabeledStep> multi_transitions(const NetState& state, const DefEnv& env,
                                           const std::vector<Value>& universe, std::size_t max_width) {
  Heads heads(state, env);
  std::vector<LabeledStep> out;
  enumerate(state, heads, universe, max_width,
            [&](const std::vector<Group>& groups) { out.push_back(build(state, env, heads, groups)); });
  return out;
}

std::vector<LabeledStep> single_transitions(const NetState& state, const DefEnv& env,
                                            const std::vector<Value>& universe) {
  return multi_transitions(state, env, universe, 1);
}

std::optional<LabeledStep> step_for_groups(const NetState& state, const DefEnv& env,
                                           const std::vector<Value>& universe,
                                           const std::vector<Group>& groups) {
  Heads heads(state, env);
  std::set<Loc> seen;
  for (const auto& g : groups) {
    for (const auto& c : g) {
      if (!heads.find(c) || !seen.insert(c.loc).second) return std::nullopt;
    }
    if (g.size() == 1) {
      const Head& h = *heads.find(g[0]);
      if (h.kind != Head::Kind::Input && h.kind != Head::Kind::Output) return std::nullopt;
      if (state.restricted.count(h.symbol)) return std::nullopt;
      if (h.kind == Head::Kind::Input && !contains(universe, g[0].value)) return std::nullopt;
    } else if (g.size() == 2) {
      const Head& in = *heads.find(g[0]);
      const Head& o = *heads.find(g[1]);
      if (in.kind != Head::Kind::Input || o.kind != Head::Kind::Output || in.symbol != o.symbol) return std::nullopt;
      if (!state.graph.adjacent(g[0].loc, g[1].loc) || g[0].value != o.value) return std::nullopt;
    } else {
      return std::nullopt;
    }
  }
  return build(state, env, heads, groups);
}

// ---------------------------------------------------------------------------
// Weak transitions

namespace {

struct Located {
  NetState state;
  ResidualMap to_root;
};

std::map<Loc, std::string> images(const ResidualMap& r) {
  std::map<Loc, std::string> out;
  for (const auto& [a, b] : r.entries()) out[a] = std::to_string(b);
  return out;
}

std::vector<Located> tau_closure(const Located& start, const DefEnv& env, const Bounds& bounds, Status& status) {
  std::vector<Located> out;
  std::set<std::string> seen;
  std::deque<std::pair<std::size_t, std::size_t>> frontier;  // (index, depth)
  auto add = [&](Located l, std::size_t depth) {
    const auto img = images(l.to_root);
    if (!seen.insert(state_key(l.state, env, &img)).second) return;
    out.push_back(std::move(l));
    frontier.emplace_back(out.size() - 1, depth);
  };
  add(start, 0);
  while (!frontier.empty()) {
    auto [i, depth] = frontier.front();
    frontier.pop_front();
    auto steps = internal_steps(out[i].state, env);
    if (steps.empty()) continue;
    if (depth >= bounds.max_depth || out.size() >= bounds.max_states) {
      status = Status::Truncated;
      continue;
    }
    const ResidualMap base = out[i].to_root;
    for (auto& s : steps) add({std::move(s.target), ResidualMap::compose(base, s.residual)}, depth + 1);
  }
  return out;
}

}  // namespace

WeakTransitions weak_transitions(const NetState& state, const DefEnv& env, const std::vector<Action>& shape,
                                 const std::vector<Value>& universe, const Bounds& bounds) {
  WeakTransitions out;
  const Located start{state, ResidualMap::identity(state.locations())};
  auto first = tau_closure(start, env, bounds, out.status);
  if (shape.empty()) {
    for (auto& l : first) out.results.push_back({l.state, l.to_root, l.to_root, {}});
    return out;
  }
  auto wanted = shape;
  std::sort(wanted.begin(), wanted.end());
  std::set<std::string> seen;
  for (const auto& mid : first) {
    for (auto& step : multi_transitions(mid.state, env, universe, wanted.size())) {
      if (step.labels.tau_count() != 0 || step.labels.visible_actions() != wanted) continue;
      std::vector<std::pair<Action, Loc>> origins;
      for (const auto& l : step.labels.labels()) origins.emplace_back(l.action, mid.to_root(l.loc));
      std::sort(origins.begin(), origins.end());
      std::string tag;
      for (const auto& [a, p] : origins) tag += a.str() + "@" + std::to_string(p) + ";";
      const Located after{std::move(step.target), ResidualMap::compose(mid.to_root, step.residual)};
      for (auto& fin : tau_closure(after, env, bounds, out.status)) {
        const auto img = images(fin.to_root);
        if (!seen.insert(state_key(fin.state, env, &img) + "|" + tag).second) continue;
        out.results.push_back({std::move(fin.state), std::move(fin.to_root), mid.to_root, origins});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Diamond property

namespace {

std::string keyed(const NetState& s, const ResidualMap& r, const DefEnv& env) {
  const auto img = images(r);
  return state_key(s, env, &img);
}

std::string group_str(const Group& g) {
  std::string out = "[";
  for (const auto& c : g) out += std::to_string(c.loc) + "#" + std::to_string(c.summand) + "/" + c.value.str() + " ";
  return out + "]";
}

// Replays the groups one at a time in the given order.
std::optional<std::pair<NetState, ResidualMap>> replay(const NetState& state, const DefEnv& env,
                                                       const std::vector<Value>& universe,
                                                       const std::vector<Group>& groups,
                                                       const std::vector<std::size_t>& order) {
  NetState cur = state;
  ResidualMap r = ResidualMap::identity(state.locations());
  for (std::size_t i : order) {
    auto s = step_for_groups(cur, env, universe, {groups[i]});
    if (!s) return std::nullopt;
    r = ResidualMap::compose(r, s->residual);
    cur = std::move(s->target);
  }
  return std::make_pair(std::move(cur), std::move(r));
}

}  // namespace

DiamondReport diamond_check(const NetState& state, const DefEnv& env, const std::vector<Value>& universe,
                            std::size_t max_width, bool decompose) {
  DiamondReport rep;
  for (const auto& step : multi_transitions(state, env, universe, std::max<std::size_t>(max_width, 2))) {
    const std::size_t n = step.groups.size();
    if (n < 2) continue;
    if (n > 2 && !decompose) continue;
    const std::string expected = keyed(step.target, step.residual, env);
    std::vector<std::vector<std::size_t>> orders;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    orders.push_back(order);
    if (n == 2) orders.push_back({1, 0});
    for (const auto& o : orders) {
      ++rep.checked;
      auto seq = replay(state, env, universe, step.groups, o);
      std::string what;
      if (!seq) {
        what = "interleaving not available";
      } else if (keyed(seq->first, seq->second, env) != expected) {
        what = "interleaving lands elsewhere";
      } else {
        continue;
      }
      std::string desc = what + " for " + step.labels.str() + " groups";
      for (std::size_t i : o) desc += " " + group_str(step.groups[i]);
      rep.counterexamples.push_back(desc + " from " + to_string(state));
    }
  }
  return rep;
}

}  // namespace vccts
