#pragma once

#include <json.hpp>

#include "vccts/equivalence.hpp"
#include "vccts/llts.hpp"
#include "vccts/reduction.hpp"

namespace vccts {

using Json = nlohmann::json;

/// {"locations": [{"id", "component"}], "edges": [[p, q]], "restricted": [...]}
Json to_json(const NetState& state);
/// Re-parses the components against `env`; inverse of to_json up to canonical key.
NetState state_from_json(const Json& j, const DefEnv& env);

Json to_json(const Value& v);
Json to_json(const LabeledStep& step);
Json to_json(const StateSpace& space);  // states plus successor edges, for external plotting
Json to_json(const BarbedResult& r);
Json to_json(const WeakResultReport& r);
Json to_json(const StrataReport& r);
Json to_json(const ImageFiniteReport& r);
Json to_json(const ContextReport& r);

}  // namespace vccts
