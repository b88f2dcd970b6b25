#include "vccts/json_io.hpp"

#include "vccts/error.hpp"
#include "vccts/parser.hpp"

namespace vccts {

Json to_json(const NetState& state) {
  Json locs = Json::array();
  for (const auto& [p, c] : state.comp) locs.push_back({{"id", p}, {"component", to_string(c)}});
  Json edges = Json::array();
  for (auto [a, b] : state.graph.edges()) edges.push_back({a, b});
  return {{"locations", locs}, {"edges", edges}, {"restricted", state.restricted}};
}

NetState state_from_json(const Json& j, const DefEnv& env) {
  NetState s;
  try {
    for (const auto& l : j.at("locations")) {
      const Loc p = l.at("id").get<Loc>();
      s.graph.add_vertex(p);
      s.comp[p] = normalize_component(parse_process(l.at("component").get<std::string>(), env));
    }
    for (const auto& e : j.at("edges")) s.graph.add_edge(e.at(0).get<Loc>(), e.at(1).get<Loc>());
    if (j.contains("restricted")) s.restricted = j.at("restricted").get<std::set<std::string>>();
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed state: ") + e.what());
  }
  return s;
}

Json to_json(const Value& v) { return v.str(); }

Json to_json(const LabeledStep& step) {
  Json labels = Json::array();
  for (const auto& l : step.labels.labels()) {
    if (l.tau) {
      labels.push_back({{"tau", true}});
      continue;
    }
    labels.push_back({{"tau", false},
                      {"loc", l.loc},
                      {"action", l.action.str()},
                      {"symbol", l.action.symbol},
                      {"co", l.action.polarity == Polarity::Co},
                      {"value", l.action.value.str()},
                      {"sets", l.sets}});
  }
  Json residual = Json::object();
  for (const auto& [a, b] : step.residual.entries()) residual[std::to_string(a)] = b;
  return {{"labels", labels}, {"multiset", step.labels.str()}, {"target", to_json(step.target)},
          {"residual", residual}};
}

Json to_json(const StateSpace& space) {
  Json states = Json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    states.push_back({{"index", i},
                      {"depth", space.depth[i]},
                      {"via", space.via[i]},
                      {"state", to_json(space.state(i))},
                      {"succ", space.succ[i]}});
  }
  return {{"status", to_string(space.status)}, {"size", space.size()}, {"states", states}};
}

Json to_json(const BarbedResult& r) {
  Json j = {{"verdict", to_string(r.verdict)},
            {"witness", r.witness},
            {"left_states", r.left_states},
            {"right_states", r.right_states},
            {"notes", r.notes}};
  if (r.barb) {
    Json b = Json::array();
    for (const auto& x : *r.barb) b.push_back(x.str());
    j["barb"] = b;
    j["barb_side"] = r.barb_on_left ? "left" : "right";
  }
  return j;
}

Json to_json(const WeakResultReport& r) {
  Json plays = Json::array();
  for (const auto& p : r.witness) {
    plays.push_back({{"challenger", p.from_left ? "left" : "right"},
                     {"label", p.label},
                     {"size", p.size},
                     {"state", p.state},
                     {"depth", p.depth}});
  }
  return {{"verdict", to_string(r.verdict)}, {"witness", plays}, {"triples", r.triples}, {"notes", r.notes}};
}

Json to_json(const StrataReport& r) {
  return {{"levels", r.levels},
          {"stabilized", r.stabilized},
          {"verdict", to_string(r.verdict)},
          {"triples", r.triples},
          {"notes", r.notes}};
}

Json to_json(const ImageFiniteReport& r) {
  return {{"within_bounds", r.within_bounds},
          {"states", r.states},
          {"max_label_multisets", r.max_label_multisets},
          {"max_weak_image", r.max_weak_image},
          {"warnings", r.warnings}};
}

Json to_json(const ContextReport& r) {
  return {{"context", r.context ? to_string(r.context) : ""},
          {"depth", r.depth},
          {"fixed_side", r.left_fixed ? "left" : "right"},
          {"derivatives", r.derivatives},
          {"verified", r.verified},
          {"notes", r.notes}};
}

}  // namespace vccts
