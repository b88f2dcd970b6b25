#include "vccts/reduction.hpp"

#include <algorithm>
#include <deque>

namespace vccts {

std::string ReductionStep::describe() const {
  return std::to_string(p) + "<-" + std::to_string(q) + " on " + symbol + "(" + value.str() + ")";
}

const char* to_string(Status s) { return s == Status::Complete ? "complete" : "truncated"; }

std::vector<ReductionStep> internal_steps(const NetState& state, const DefEnv& env) {
  std::map<Loc, HeadForm> heads;
  for (const auto& [p, c] : state.comp) heads[p] = cs_head(c, env);

  std::vector<ReductionStep> out;
  for (const auto& [p, hp] : heads) {
    for (Loc q : state.graph.neighbors(p)) {
      const auto& hq = heads.at(q);
      for (const auto& in : hp) {
        if (in.kind != Head::Kind::Input) continue;
        for (const auto& o : hq) {
          if (o.kind != Head::Kind::Output || o.symbol != in.symbol) continue;
          std::vector<TermPtr> received;
          for (const auto& c : in.children) received.push_back(subst_value(c, in.var, o.value));
          auto fired = fire(state, {{p, received}, {q, o.children}}, env);
          ReductionStep s;
          s.target = std::move(fired.target);
          s.residual = std::move(fired.residual);
          s.p = p;
          s.q = q;
          s.symbol = in.symbol;
          s.value = o.value;
          s.p_summand = in.index;
          s.q_summand = o.index;
          out.push_back(std::move(s));
        }
      }
    }
  }
  return out;
}

std::vector<std::size_t> StateSpace::path_to(std::size_t i) const {
  std::vector<std::size_t> path{i};
  while (i != 0) {
    i = parent[i];
    path.push_back(i);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

// BFS; `stop` may end the search early at a newly discovered state.
template <class Stop>
StateSpace explore(const NetState& init, const DefEnv& env, const Bounds& bounds, Stop stop,
                   std::optional<std::size_t>& hit) {
  StateSpace sp;
  auto add = [&](CanonicalState cs, std::size_t parent, std::string via, std::size_t depth) {
    auto [it, inserted] = sp.index.emplace(cs.key, sp.states.size());
    if (inserted) {
      sp.states.push_back(std::move(cs));
      sp.succ.emplace_back();
      sp.parent.push_back(parent);
      sp.via.push_back(std::move(via));
      sp.depth.push_back(depth);
    }
    return std::make_pair(it->second, inserted);
  };
  add(canonicalize(init, env), 0, "", 0);
  if (stop(sp.state(0))) {
    hit = 0;
    return sp;
  }
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop_front();
    auto steps = internal_steps(sp.state(i), env);
    if (steps.empty()) continue;
    if (sp.depth[i] >= bounds.max_depth) {
      sp.status = Status::Truncated;
      continue;
    }
    for (auto& s : steps) {
      if (sp.states.size() >= bounds.max_states && !sp.index.count(state_key(s.target, env))) {
        sp.status = Status::Truncated;
        continue;
      }
      auto [j, fresh] = add(canonicalize(s.target, env), i, s.describe(), sp.depth[i] + 1);
      if (std::find(sp.succ[i].begin(), sp.succ[i].end(), j) == sp.succ[i].end()) sp.succ[i].push_back(j);
      if (!fresh) continue;
      if (stop(sp.state(j))) {
        hit = j;
        return sp;
      }
      frontier.push_back(j);
    }
  }
  return sp;
}

}  // namespace

StateSpace reachable(const NetState& state, const DefEnv& env, const Bounds& bounds) {
  std::optional<std::size_t> hit;
  return explore(state, env, bounds, [](const NetState&) { return false; }, hit);
}

IdleSearch reduces_to_idle(const NetState& state, const DefEnv& env, const Bounds& bounds) {
  std::optional<std::size_t> hit;
  auto sp = explore(state, env, bounds, [&](const NetState& s) { return is_idle(s, env); }, hit);
  IdleSearch out;
  out.status = sp.status;
  if (!hit) return out;
  out.found = true;
  for (std::size_t i : sp.path_to(*hit)) {
    out.trace.push_back(sp.state(i));
    if (i != 0) out.steps.push_back(sp.via[i]);
  }
  return out;
}

}  // namespace vccts
