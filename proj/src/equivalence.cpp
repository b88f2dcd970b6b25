#include "vccts/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>

#include "vccts/error.hpp"

namespace vccts {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Bisimilar: return "bisimilar";
    case Verdict::Distinguished: return "not";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

std::string barb_set_str(const BarbSet& b) {
  std::string out = "{";
  bool first = true;
  for (const auto& x : b) {
    out += (first ? "" : ", ") + x.str();
    first = false;
  }
  return out + "}";
}

std::string actions_str(const std::vector<Action>& acts) {
  std::string out = "{";
  for (std::size_t i = 0; i < acts.size(); ++i) out += (i ? ", " : "") + acts[i].str();
  return out + "}";
}

// Reflexive-transitive successor sets of a state space.
std::vector<std::vector<std::size_t>> star_closure(const StateSpace& sp) {
  std::vector<std::vector<std::size_t>> out(sp.size());
  for (std::size_t i = 0; i < sp.size(); ++i) {
    std::vector<bool> seen(sp.size(), false);
    std::vector<std::size_t> stack{i};
    seen[i] = true;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      out[i].push_back(u);
      for (auto v : sp.succ[u]) {
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Weak barbed bisimilarity

BarbedResult weak_barbed_bisim(const NetState& p, const NetState& q, const DefEnv& env, const GameConfig& cfg) {
  BarbedResult res;
  const auto left = reachable(p, env, cfg.bounds);
  const auto right = reachable(q, env, cfg.bounds);
  res.left_states = left.size();
  res.right_states = right.size();
  if (left.status == Status::Truncated || right.status == Status::Truncated) {
    res.notes.push_back("reachable set truncated at " + std::to_string(cfg.bounds.max_states) + " states / depth " +
                        std::to_string(cfg.bounds.max_depth));
    return res;
  }
  const auto lstar = star_closure(left);
  const auto rstar = star_closure(right);

  auto families = [&](const StateSpace& sp, const std::vector<std::vector<std::size_t>>& star) {
    std::vector<std::set<BarbSet>> own(sp.size()), weak(sp.size());
    for (std::size_t i = 0; i < sp.size(); ++i) own[i] = satisfiable_barb_sets(sp.state(i), env);
    for (std::size_t i = 0; i < sp.size(); ++i) {
      for (auto j : star[i]) weak[i].insert(own[j].begin(), own[j].end());
    }
    return weak;
  };
  const auto lw = families(left, lstar);
  const auto rw = families(right, rstar);

  const std::size_t n = left.size(), m = right.size();
  std::vector<std::vector<char>> rel(n, std::vector<char>(m, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) rel[i][j] = lw[i] == rw[j];
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (!rel[i][j]) continue;
        bool ok = std::all_of(lstar[i].begin(), lstar[i].end(), [&](std::size_t a) {
          return std::any_of(rstar[j].begin(), rstar[j].end(), [&](std::size_t b) { return rel[a][b] != 0; });
        });
        ok = ok && std::all_of(rstar[j].begin(), rstar[j].end(), [&](std::size_t b) {
          return std::any_of(lstar[i].begin(), lstar[i].end(), [&](std::size_t a) { return rel[a][b] != 0; });
        });
        if (!ok) {
          rel[i][j] = 0;
          changed = true;
        }
      }
    }
  }
  if (rel[0][0]) {
    res.verdict = Verdict::Bisimilar;
    return res;
  }
  res.verdict = Verdict::Distinguished;

  // Smallest barb set seen by one side only, searched from the initial pair downwards.
  auto pick_barb = [&](std::size_t i, std::size_t j) -> bool {
    std::optional<BarbSet> best;
    bool on_left = true;
    auto consider = [&](const std::set<BarbSet>& a, const std::set<BarbSet>& b, bool left_side) {
      for (const auto& s : a) {
        if (b.count(s)) continue;
        if (!best || s.size() < best->size() || (s.size() == best->size() && s < *best)) {
          best = s;
          on_left = left_side;
        }
      }
    };
    consider(lw[i], rw[j], true);
    consider(rw[j], lw[i], false);
    if (!best) return false;
    res.barb = best;
    res.barb_on_left = on_left;
    return true;
  };
  if (pick_barb(0, 0)) {
    res.witness = "barb " + barb_set_str(*res.barb) + " is reachable only on the " +
                  (res.barb_on_left ? "left" : "right");
    return res;
  }
  for (auto a : lstar[0]) {
    bool matched = std::any_of(rstar[0].begin(), rstar[0].end(), [&](std::size_t b) { return rel[a][b] != 0; });
    if (!matched) {
      res.witness = "left derivative " + to_string(left.state(a)) + " has no counterpart on the right";
      return res;
    }
  }
  for (auto b : rstar[0]) {
    bool matched = std::any_of(lstar[0].begin(), lstar[0].end(), [&](std::size_t a) { return rel[a][b] != 0; });
    if (!matched) {
      res.witness = "right derivative " + to_string(right.state(b)) + " has no counterpart on the left";
      return res;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// The localized game

namespace {

struct Move {
  std::size_t target = 0;
  ResidualMap residual;                        // canonical target -> canonical source
  std::vector<std::pair<Action, Loc>> labels;  // visible labels located in the source
  bool tau = false;
};

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// A defender answer, turned into a triple only when someone asks for it.
struct Response {
  const Move* move = nullptr;
  std::size_t triple = kNone;
  bool resolved = false;
};

struct Challenge {
  bool from_left = true;
  bool tau = false;
  std::vector<Action> actions;
  std::vector<std::size_t> succ;  // filled by Game::successors
  std::size_t source = 0;         // challenger state
  const Move* move = nullptr;
  std::vector<Response> responses;
  bool complete = false;
};

struct Triple {
  std::size_t left = 0, right = 0;
  LocRelation rel;  // empty when `full`
  bool full = false;
  std::size_t depth = 0;
  bool expanded = false;
  std::vector<Challenge> challenges;
};

class Game {
 public:
  Game(const DefEnv& env, const GameConfig& cfg, bool localized) : env_(env), cfg_(cfg), localized_(localized) {}

  // Interns a state and returns its id with the map original -> canonical location.
  std::pair<std::size_t, std::map<Loc, Loc>> intern(const NetState& s) {
    auto cs = canonicalize(s, env_);
    auto relabel = cs.relabel;
    auto [it, fresh] = index_.emplace(cs.key, states_.size());
    if (fresh) states_.push_back(std::move(cs));
    return {it->second, relabel};
  }

  const NetState& state(std::size_t i) const { return states_[i].state; }

  std::size_t triple(std::size_t l, std::size_t r, LocRelation rel, std::size_t depth, bool is_full = false) {
    if (!localized_ || (!is_full && rel.size() == state(l).comp.size() * state(r).comp.size())) is_full = true;
    if (is_full) rel.clear();
    std::string key = std::to_string(l) + "|" + std::to_string(r) + "|";
    if (is_full) key += "*";
    for (auto [a, b] : rel) key += std::to_string(a) + "," + std::to_string(b) + ";";
    auto [it, fresh] = triple_index_.emplace(std::move(key), triples_.size());
    if (fresh) triples_.push_back({l, r, std::move(rel), is_full, depth, false, {}});
    return it->second;
  }

  LocRelation full(std::size_t l, std::size_t r) const {
    LocRelation out;
    for (Loc a : state(l).locations()) {
      for (Loc b : state(r).locations()) out.emplace(a, b);
    }
    return out;
  }

  std::vector<Triple>& triples() { return triples_; }
  bool truncated() const { return truncated_; }

  std::size_t expanded() const { return expanded_; }

  const std::vector<Challenge>& challenges(std::size_t t) {
    if (!triples_[t].expanded) expand(t);
    return triples_[t].challenges;
  }

  // Triple reached by response k of challenge c at t, kNone when the labels cannot be matched.
  std::size_t response(std::size_t t, std::size_t c, std::size_t k) {
    auto& r = triples_[t].challenges[c].responses[k];
    if (!r.resolved) {
      const std::size_t id = resolve(t, triples_[t].challenges[c], *r.move);
      auto& again = triples_[t].challenges[c].responses[k];
      again.triple = id;
      again.resolved = true;
    }
    return triples_[t].challenges[c].responses[k].triple;
  }

  // The state pair a response leads to, left first.
  std::pair<std::size_t, std::size_t> response_states(std::size_t t, std::size_t c, std::size_t k) const {
    const auto& ch = triples_[t].challenges[c];
    const auto d = ch.responses[k].move->target;
    return ch.from_left ? std::make_pair(ch.move->target, d) : std::make_pair(d, ch.move->target);
  }

  const std::vector<std::size_t>& successors(std::size_t t, std::size_t c) {
    if (!triples_[t].challenges[c].complete) {
      std::vector<std::size_t> out;
      for (std::size_t k = 0; k < triples_[t].challenges[c].responses.size(); ++k) {
        const auto id = response(t, c, k);
        if (id != kNone) out.push_back(id);
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      triples_[t].challenges[c].succ = std::move(out);
      triples_[t].challenges[c].complete = true;
    }
    return triples_[t].challenges[c].succ;
  }

  // Search-order hint for the defender: 0 when both sides agree once idle locations are
  // dropped, else 1 + the symmetric difference of their non-idle component multisets.
  std::size_t distance(std::size_t l, std::size_t r) {
    if (core(l) == core(r)) return 0;
    const auto& a = signature(l);
    const auto& b = signature(r);
    std::vector<std::string> diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
    return 1 + diff.size();
  }
  std::vector<std::string>& notes() { return notes_; }

  // Explores triples breadth-first; triples at `depth_limit` are left unexpanded.
  bool explore(std::size_t root, std::size_t depth_limit) {
    std::deque<std::size_t> queue{root};
    bool cut = false;
    while (!queue.empty()) {
      auto t = queue.front();
      queue.pop_front();
      if (triples_[t].expanded) continue;
      if (triples_[t].depth >= depth_limit) {
        cut = true;
        continue;
      }
      expand(t);
      for (std::size_t c = 0; c < triples_[t].challenges.size(); ++c) {
        for (auto s : successors(t, c)) {
          if (!triples_[s].expanded) queue.push_back(s);
        }
      }
      if (triples_.size() > cfg_.max_triples) {
        truncated_ = true;
        notes_.push_back("triple budget of " + std::to_string(cfg_.max_triples) + " exceeded");
        return false;
      }
    }
    return !cut;
  }

 private:
  const DefEnv& env_;
  const GameConfig& cfg_;
  bool localized_;
  std::vector<CanonicalState> states_;
  std::map<std::string, std::size_t> index_;
  std::vector<Triple> triples_;
  std::unordered_map<std::string, std::size_t> triple_index_;
  std::map<std::size_t, std::vector<Move>> taus_, visibles_;
  std::map<std::pair<std::size_t, std::vector<Action>>, std::vector<Move>> weak_;
  std::map<std::size_t, std::vector<Move>> closures_;
  bool truncated_ = false;
  std::vector<std::string> notes_;
  std::map<std::size_t, std::vector<std::string>> signatures_;
  std::map<std::size_t, std::string> cores_;
  std::size_t expanded_ = 0;

  const std::string& core(std::size_t s) {
    auto it = cores_.find(s);
    if (it != cores_.end()) return it->second;
    NetState stripped = state(s);
    for (Loc p : stripped.locations()) {
      NetState one;
      one.graph.add_vertex(p);
      one.comp[p] = stripped.comp.at(p);
      if (is_idle(one, env_)) {
        stripped.graph.remove_vertex(p);
        stripped.comp.erase(p);
      }
    }
    return cores_[s] = state_key(stripped, env_);
  }

  const std::vector<std::string>& signature(std::size_t s) {
    auto it = signatures_.find(s);
    if (it != signatures_.end()) return it->second;
    std::vector<std::string> out;
    for (const auto& [_, c] : state(s).comp) {
      if (c->kind != Term::Kind::Idle) out.push_back(to_string(c));
    }
    std::sort(out.begin(), out.end());
    return signatures_[s] = std::move(out);
  }

  Move located(const NetState& target, const ResidualMap& residual) {
    auto [id, relabel] = intern(target);
    Move m;
    m.target = id;
    for (const auto& [orig, canon] : relabel) m.residual.set(canon, residual(orig));
    return m;
  }

  const std::vector<Move>& taus(std::size_t s) {
    auto it = taus_.find(s);
    if (it != taus_.end()) return it->second;
    std::vector<Move> out;
    for (auto& step : internal_steps(state(s), env_)) {
      auto m = located(step.target, step.residual);
      m.tau = true;
      out.push_back(std::move(m));
    }
    return taus_[s] = std::move(out);
  }

  const std::vector<Move>& visibles(std::size_t s) {
    auto it = visibles_.find(s);
    if (it != visibles_.end()) return it->second;
    std::vector<Move> out;
    for (auto& step : multi_transitions(state(s), env_, cfg_.universe, cfg_.max_width)) {
      if (step.labels.tau_count() != 0) continue;
      auto m = located(step.target, step.residual);
      for (const auto& l : step.labels.labels()) m.labels.emplace_back(l.action, l.loc);
      out.push_back(std::move(m));
    }
    return visibles_[s] = std::move(out);
  }

  // tau* closure of s with residuals back to s, the state itself first.
  const std::vector<Move>& closure(std::size_t s) {
    auto it = closures_.find(s);
    if (it != closures_.end()) return it->second;
    std::vector<Move> out;
    std::set<std::pair<std::size_t, std::map<Loc, Loc>>> seen;
    Move self;
    self.target = s;
    self.residual = ResidualMap::identity(state(s).locations());
    seen.emplace(s, self.residual.entries());
    out.push_back(std::move(self));
    for (std::size_t i = 0; i < out.size(); ++i) {
      const std::size_t from = out[i].target;
      const ResidualMap back = out[i].residual;
      for (const auto& m : taus(from)) {
        auto res = ResidualMap::compose(back, m.residual);
        if (!seen.emplace(m.target, res.entries()).second) continue;
        if (out.size() >= cfg_.bounds.max_states) {
          if (!truncated_) notes_.push_back("weak transition search truncated");
          truncated_ = true;
          break;
        }
        Move next;
        next.target = m.target;
        next.residual = std::move(res);
        next.tau = true;
        out.push_back(std::move(next));
      }
    }
    return closures_[s] = std::move(out);
  }

  // Weak moves tau* shape tau*, labels located in s.
  const std::vector<Move>& weak(std::size_t s, const std::vector<Action>& shape) {
    auto key = std::make_pair(s, shape);
    auto it = weak_.find(key);
    if (it != weak_.end()) return it->second;
    std::vector<Move> out;
    if (shape.empty()) {
      out = closure(s);
      return weak_[key] = std::move(out);
    }
    std::set<std::tuple<std::size_t, std::map<Loc, Loc>, std::vector<std::pair<Action, Loc>>>> seen;
    const auto& before = closure(s);
    for (const auto& m1 : before) {
      const auto& vis = visibles(m1.target);
      for (const auto& v : vis) {
        if (v.labels.size() != shape.size()) continue;
        std::vector<Action> acts;
        for (const auto& [a, _] : v.labels) acts.push_back(a);
        std::sort(acts.begin(), acts.end());
        if (acts != shape) continue;
        std::vector<std::pair<Action, Loc>> labels;
        for (const auto& [a, l] : v.labels) labels.emplace_back(a, m1.residual(l));
        std::sort(labels.begin(), labels.end());
        const auto mid = ResidualMap::compose(m1.residual, v.residual);
        const auto& after = closure(v.target);
        for (const auto& m3 : after) {
          auto res = ResidualMap::compose(mid, m3.residual);
          if (!seen.emplace(m3.target, res.entries(), labels).second) continue;
          Move m;
          m.target = m3.target;
          m.residual = std::move(res);
          m.labels = labels;
          out.push_back(std::move(m));
        }
      }
    }
    return weak_[key] = std::move(out);
  }

  // Perfect matching between challenger labels and defender labels with equal actions whose
  // locations are related (challenger location first).
  template <class Related>
  static bool labels_match(const std::vector<std::pair<Action, Loc>>& ch, const std::vector<std::pair<Action, Loc>>& df,
                           const Related& related) {
    if (ch.size() != df.size()) return false;
    std::vector<int> owner(df.size(), -1);
    std::vector<char> seen;
    auto augment = [&](auto& self, std::size_t i) -> bool {
      for (std::size_t j = 0; j < df.size(); ++j) {
        if (seen[j] || ch[i].first != df[j].first || !related(ch[i].second, df[j].second)) continue;
        seen[j] = 1;
        if (owner[j] < 0 || self(self, static_cast<std::size_t>(owner[j]))) {
          owner[j] = static_cast<int>(i);
          return true;
        }
      }
      return false;
    };
    for (std::size_t i = 0; i < ch.size(); ++i) {
      seen.assign(df.size(), 0);
      if (!augment(augment, i)) return false;
    }
    return true;
  }

  std::size_t resolve(std::size_t t, const Challenge& c, const Move& dm) {
    const Move& cm = *c.move;
    const bool from_left = c.from_left;
    const bool all = triples_[t].full || !localized_;
    // related(challenger loc, defender loc) in the triple's orientation
    auto related = [&](Loc a, Loc b) {
      if (all) return true;
      const auto& rel = triples_[t].rel;
      return from_left ? rel.count({a, b}) != 0 : rel.count({b, a}) != 0;
    };
    if (!c.tau && !labels_match(cm.labels, dm.labels, related)) return kNone;
    LocRelation rel;
    if (!all) {
      const auto& ct = state(cm.target);
      const auto& dt = state(dm.target);
      for (const auto& [a, _] : ct.comp) {
        const Loc ra = cm.residual(a);
        for (const auto& [b, __] : dt.comp) {
          if (related(ra, dm.residual(b))) rel.emplace(from_left ? LocPair{a, b} : LocPair{b, a});
        }
      }
    }
    const std::size_t depth = triples_[t].depth + 1;
    return from_left ? triple(cm.target, dm.target, std::move(rel), depth, all)
                     : triple(dm.target, cm.target, std::move(rel), depth, all);
  }

  void challenges_from(std::size_t t, bool from_left) {
    const std::size_t cs = from_left ? triples_[t].left : triples_[t].right;
    const std::size_t ds = from_left ? triples_[t].right : triples_[t].left;
    std::vector<Challenge> out;
    for (const auto& cm : taus(cs)) {
      Challenge c{from_left, true, {}, {}, cs, &cm, {}, false};
      for (const auto& dm : weak(ds, {})) c.responses.push_back({&dm});
      out.push_back(std::move(c));
    }
    for (const auto& cm : visibles(cs)) {
      Challenge c{from_left, false, {}, {}, cs, &cm, {}, false};
      for (const auto& [a, _] : cm.labels) c.actions.push_back(a);
      std::sort(c.actions.begin(), c.actions.end());
      for (const auto& dm : weak(ds, c.actions)) c.responses.push_back({&dm});
      out.push_back(std::move(c));
    }
    for (auto& c : out) triples_[t].challenges.push_back(std::move(c));
  }

  void expand(std::size_t t) {
    triples_[t].expanded = true;
    ++expanded_;
    challenges_from(t, true);
    challenges_from(t, false);
  }
};

std::string challenge_label(const Challenge& c) { return c.tau ? "tau" : actions_str(c.actions); }

std::vector<Play> witness_from(Game& g, const std::vector<std::optional<std::size_t>>& killer, std::size_t root) {
  std::vector<Play> out;
  std::set<std::size_t> seen;
  std::size_t t = root;
  while (killer[t] && seen.insert(t).second && out.size() < 32) {
    const auto& tr = g.triples()[t];
    const auto& c = tr.challenges[*killer[t]];
    out.push_back({c.from_left, challenge_label(c), c.tau ? 1 : c.actions.size(), to_string(g.state(c.source)),
                   tr.depth});
    // follow a response whose refutation is known
    std::optional<std::size_t> next;
    for (std::size_t k = 0; k < c.responses.size() && !next; ++k) {
      const auto& r = c.responses[k];
      if (r.resolved && r.triple != kNone && r.triple < killer.size() && killer[r.triple]) next = r.triple;
    }
    if (!next) break;
    t = *next;
  }
  return out;
}

std::pair<std::size_t, LocRelation> initial_triple(Game& g, const NetState& p, const NetState& q,
                                                   const std::optional<LocRelation>& e) {
  auto [l, lmap] = g.intern(p);
  auto [r, rmap] = g.intern(q);
  LocRelation rel;
  if (e) {
    for (auto [a, b] : *e) {
      if (!lmap.count(a) || !rmap.count(b)) throw Error("relation mentions a location outside the states");
      rel.emplace(lmap.at(a), rmap.at(b));
    }
  } else {
    rel = g.full(l, r);
  }
  return {g.triple(l, r, rel, 0), e ? *e : LocRelation{}};
}

// On-the-fly greatest fixpoint. A depth-first pass answers each challenge with the first
// response not known to be bad, assuming triples on the current path are good. Bad marks are
// always sound; a pass that marks nothing new has visited a bisimulation.
class LazySolver {
 public:
  explicit LazySolver(Game& g) : g_(g) {}

  bool run(std::size_t root, std::size_t budget) {
    for (;;) {
      visited_.assign(g_.triples().size(), 0);
      fresh_bad_ = false;
      const bool ok = check(root, budget);
      if (!ok || !fresh_bad_ || over_) return ok;
    }
  }

  bool over_budget() const { return over_; }
  const std::vector<std::optional<std::size_t>>& killer() const { return killer_; }

 private:
  Game& g_;
  std::vector<char> visited_;
  std::vector<std::optional<std::size_t>> killer_;
  bool fresh_bad_ = false;
  bool over_ = false;

  bool bad(std::size_t t) const { return t < killer_.size() && killer_[t].has_value(); }

  bool check(std::size_t t, std::size_t budget) {
    if (bad(t)) return false;
    if (visited_.size() <= t) visited_.resize(g_.triples().size(), 0);
    if (visited_[t]) return true;
    visited_[t] = 1;
    if (g_.expanded() >= budget && !g_.triples()[t].expanded) {
      over_ = true;
      return true;
    }
    const std::size_t n = g_.challenges(t).size();
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t m = g_.triples()[t].challenges[c].responses.size();
      std::vector<std::pair<std::size_t, std::size_t>> order;
      for (std::size_t k = 0; k < m; ++k) {
        const auto& r = g_.triples()[t].challenges[c].responses[k];
        if (r.resolved && (r.triple == kNone || bad(r.triple))) continue;
        if (r.resolved && r.triple < visited_.size() && visited_[r.triple]) {
          order.emplace_back(0, k);
          continue;
        }
        auto [l, rr] = g_.response_states(t, c, k);
        order.emplace_back(1 + g_.distance(l, rr), k);
      }
      std::stable_sort(order.begin(), order.end());
      bool answered = false;
      for (auto [_, k] : order) {
        const auto s = g_.response(t, c, k);
        if (s == kNone) continue;
        if (visited_.size() < g_.triples().size()) visited_.resize(g_.triples().size(), 0);
        if (check(s, budget)) {
          answered = true;
          break;
        }
      }
      if (!answered) {
        if (killer_.size() <= t) killer_.resize(g_.triples().size());
        killer_[t] = c;
        fresh_bad_ = true;
        return false;
      }
    }
    return true;
  }
};

}  // namespace

WeakResultReport weak_bisim(const NetState& p, const NetState& q, const DefEnv& env, const GameConfig& cfg,
                            const std::optional<LocRelation>& e) {
  WeakResultReport rep;
  Game g(env, cfg, true);
  auto [root, given] = initial_triple(g, p, q, e);
  if (!e) {
    for (Loc a : p.locations()) {
      for (Loc b : q.locations()) given.emplace(a, b);
    }
  }
  rep.relation = given;
  LazySolver solver(g);
  const bool ok = solver.run(root, cfg.max_triples);
  if (solver.over_budget()) g.notes().push_back("budget of " + std::to_string(cfg.max_triples) + " expanded triples exceeded");
  rep.triples = g.triples().size();
  rep.notes = g.notes();
  const bool exact = !g.truncated() && !solver.over_budget();
  if (!ok) {
    rep.verdict = g.truncated() ? Verdict::Inconclusive : Verdict::Distinguished;
    auto killer = solver.killer();
    killer.resize(g.triples().size());
    rep.witness = witness_from(g, killer, root);
  } else {
    rep.verdict = exact ? Verdict::Bisimilar : Verdict::Inconclusive;
  }
  return rep;
}

namespace {

// Synchronous rounds: level k+1 from level k over the explored triples.
std::vector<std::vector<char>> approximants(Game& g, std::size_t n) {
  const auto& ts = g.triples();
  for (std::size_t t = 0; t < ts.size(); ++t) {
    if (!ts[t].expanded) continue;
    for (std::size_t c = 0; c < ts[t].challenges.size(); ++c) g.successors(t, c);
  }
  std::vector<std::vector<char>> levels{std::vector<char>(ts.size(), 1)};
  for (std::size_t k = 0; k < n; ++k) {
    const auto& prev = levels.back();
    std::vector<char> cur(ts.size(), 1);
    for (std::size_t t = 0; t < ts.size(); ++t) {
      if (!ts[t].expanded) continue;
      for (const auto& c : ts[t].challenges) {
        if (std::none_of(c.succ.begin(), c.succ.end(), [&](std::size_t s) { return prev[s] != 0; })) {
          cur[t] = 0;
          break;
        }
      }
    }
    levels.push_back(std::move(cur));
  }
  return levels;
}

}  // namespace

StrataReport stratified_bisim(const NetState& p, const NetState& q, const DefEnv& env, const GameConfig& cfg,
                              std::size_t n) {
  StrataReport rep;
  Game g(env, cfg, true);
  auto [root, _] = initial_triple(g, p, q, std::nullopt);
  const bool complete = g.explore(root, n);
  rep.triples = g.triples().size();
  rep.notes = g.notes();
  const auto levels = approximants(g, n);
  for (const auto& l : levels) rep.levels.push_back(l[root] != 0);
  if (complete && !g.truncated()) {
    for (std::size_t k = 1; k < levels.size(); ++k) {
      if (levels[k] == levels[k - 1]) {
        rep.stabilized = true;
        rep.verdict = levels[k][root] ? Verdict::Bisimilar : Verdict::Distinguished;
        break;
      }
    }
  }
  if (!rep.stabilized && !levels.back()[root] && !g.truncated()) rep.verdict = Verdict::Distinguished;
  return rep;
}

ImageFiniteReport image_finite_guard(const NetState& p, const DefEnv& env, const GameConfig& cfg) {
  ImageFiniteReport rep;
  std::map<std::string, std::size_t> seen;
  std::deque<NetState> queue{p};
  seen.emplace(state_key(p, env), 0);
  while (!queue.empty()) {
    NetState s = std::move(queue.front());
    queue.pop_front();
    ++rep.states;
    auto closure = weak_transitions(s, env, {}, cfg.universe, cfg.bounds);
    rep.max_weak_image = std::max(rep.max_weak_image, closure.results.size());
    if (closure.status == Status::Truncated && rep.within_bounds) {
      rep.within_bounds = false;
      rep.warnings.push_back("tau closure truncated from " + to_string(s));
    }
    std::set<std::vector<Action>> shapes;
    std::vector<NetState> next;
    for (auto& step : multi_transitions(s, env, cfg.universe, cfg.max_width)) {
      if (step.labels.tau_count() == 0) shapes.insert(step.labels.visible_actions());
      if (step.labels.size() == 1) next.push_back(std::move(step.target));
    }
    rep.max_label_multisets = std::max(rep.max_label_multisets, shapes.size());
    for (auto& t : next) {
      if (seen.size() >= cfg.bounds.max_states) {
        if (rep.within_bounds) rep.warnings.push_back("state budget of " + std::to_string(cfg.bounds.max_states) +
                                                      " exhausted");
        rep.within_bounds = false;
        break;
      }
      auto key = state_key(t, env);
      if (seen.emplace(key, seen.size()).second) queue.push_back(std::move(t));
    }
  }
  return rep;
}

NetState parallel_with(const NetState& p, const TermPtr& r, const DefEnv& env) {
  NetState out = p;
  attach(out, r, env, true);
  return out;
}

// ---------------------------------------------------------------------------
// Distinguishing contexts

namespace {

class ContextBuilder {
 public:
  ContextBuilder(Game& g, const std::vector<std::vector<char>>& levels, DefEnv& env, std::set<std::string> avoid)
      : g_(g), levels_(levels), env_(env), avoid_(std::move(avoid)) {
    d_ = fresh("d");
    fuel_ = fresh_constant("Fuel");
    env_.define({fuel_, {}, term::output(d_, expr::lit(Value::integer(0)), {term::constant(fuel_)})});
  }

  const std::string& fuel() const { return fuel_; }

  // Components of the context that refutes triple t at approximant k.
  std::vector<TermPtr> build(std::size_t t, std::size_t k, bool* from_left = nullptr) {
    const auto& tr = g_.triples()[t];
    const Challenge* chosen = nullptr;
    for (const auto& c : tr.challenges) {
      if (std::none_of(c.succ.begin(), c.succ.end(), [&](std::size_t s) { return levels_[k - 1][s] != 0; })) {
        chosen = &c;
        break;
      }
    }
    if (!chosen) throw Error("internal: no refuting challenge at approximant " + std::to_string(k));
    if (from_left) *from_left = chosen->from_left;

    // One sub-context per defender answer, each flagged by a fresh barb.
    std::vector<TermPtr> branches;
    for (auto s : chosen->succ) {
      auto sub = build(s, k - 1);
      const auto flag = fresh("c");
      std::vector<TermPtr> comps = sub;
      comps[0] = term::sum(comps[0], signal(flag));
      branches.push_back(term::input(d_, "x", {as_process(comps)}));
    }

    std::vector<TermPtr> out;
    if (chosen->tau) {
      auto m = branches;
      m.push_back(signal(fresh("g")));
      out.push_back(term::sum(m));
      return out;
    }
    for (std::size_t i = 0; i < chosen->actions.size(); ++i) {
      const Action& a = chosen->actions[i];
      std::vector<TermPtr> n{signal(fresh("c"))};
      if (i == 0) n.insert(n.end(), branches.begin(), branches.end());
      const TermPtr body = term::sum(n);
      const int arity = *env_.arity(a.symbol);
      std::vector<TermPtr> kids(static_cast<std::size_t>(arity), term::idle());
      TermPtr m;
      if (a.polarity == Polarity::Plain) {
        // the process receives, the context sends
        kids[0] = body;
        m = term::output(a.symbol, expr::lit(a.value), kids);
      } else {
        kids[0] = term::cond(expr::apply(Op::Eq, {expr::var("x"), expr::lit(a.value)}), body, term::idle());
        m = term::input(a.symbol, "x", kids);
      }
      out.push_back(term::sum(m, signal(fresh("g"))));
    }
    return out;
  }

  TermPtr as_process(const std::vector<TermPtr>& comps) const {
    if (comps.size() == 1) return comps[0];
    std::vector<std::string> locs;
    for (std::size_t i = 0; i < comps.size(); ++i) locs.push_back("m" + std::to_string(i + 1));
    return term::graph(locs, {}, comps);
  }

  std::vector<std::string> notes;

 private:
  Game& g_;
  const std::vector<std::vector<char>>& levels_;
  DefEnv& env_;
  std::set<std::string> avoid_;
  std::string d_, fuel_;

  std::string fresh(const std::string& base) {
    for (std::size_t k = 1;; ++k) {
      std::string name = base + std::to_string(k);
      if (env_.arity(name) || avoid_.count(name)) continue;
      avoid_.insert(name);
      env_.declare_symbol(name, 1);
      return name;
    }
  }

  std::string fresh_constant(const std::string& base) {
    for (std::size_t k = 1;; ++k) {
      std::string name = base + std::to_string(k);
      if (!env_.find(name)) return name;
    }
  }

  TermPtr signal(const std::string& sym) const {
    return term::output(sym, expr::lit(Value::integer(0)), {term::idle()});
  }
};

}  // namespace

ContextReport distinguishing_context(const NetState& p, const NetState& q, const DefEnv& env,
                                     const GameConfig& cfg, std::size_t depth) {
  ContextReport rep;
  rep.env = env;
  Game g(env, cfg, false);
  auto [root, _] = initial_triple(g, p, q, std::nullopt);
  const std::size_t limit = depth ? depth : 8;
  g.explore(root, limit);
  if (g.truncated()) throw Error("distinguishing context: game exploration truncated");
  const auto levels = approximants(g, limit);
  std::size_t n = 0;
  if (depth) {
    if (levels[depth][root]) throw Error("precondition: the pair is not separated at approximant " +
                                         std::to_string(depth));
    n = depth;
  } else {
    for (std::size_t k = 1; k <= limit; ++k) {
      if (!levels[k][root]) {
        n = k;
        break;
      }
    }
    if (!n) throw Error("precondition: the pair is not separated within " + std::to_string(limit) + " rounds");
  }
  rep.depth = n;

  auto avoid = state_names(p, env);
  auto more = state_names(q, env);
  avoid.insert(more.begin(), more.end());
  ContextBuilder b(g, levels, rep.env, avoid);
  auto comps = b.build(root, n, &rep.left_fixed);
  comps.push_back(term::constant(b.fuel()));
  std::vector<std::string> locs;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    locs.push_back("r" + std::to_string(i + 1));
    if (i + 1 < comps.size()) edges.emplace_back(i, comps.size() - 1);
  }
  rep.context = comps.size() == 1 ? comps[0] : term::graph(locs, edges, comps);

  const NetState& fixed = rep.left_fixed ? p : q;
  const NetState& moving = rep.left_fixed ? q : p;
  const NetState fixed_r = parallel_with(fixed, rep.context, rep.env);
  const auto derivs = reachable(moving, rep.env, cfg.bounds);
  if (derivs.status == Status::Truncated) rep.notes.push_back("derivatives truncated");
  rep.verified = true;
  for (std::size_t i = 0; i < derivs.size(); ++i) {
    const NetState other_r = parallel_with(derivs.state(i), rep.context, rep.env);
    auto res = rep.left_fixed ? weak_barbed_bisim(fixed_r, other_r, rep.env, cfg)
                              : weak_barbed_bisim(other_r, fixed_r, rep.env, cfg);
    ++rep.derivatives;
    if (res.verdict != Verdict::Distinguished) {
      rep.verified = false;
      rep.notes.push_back(std::string("derivative ") + to_string(derivs.state(i)) + " gives " +
                          to_string(res.verdict));
    }
  }
  return rep;
}

}  // namespace vccts
