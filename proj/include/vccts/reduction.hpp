#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vccts/net_state.hpp"

namespace vccts {

struct ReductionStep {
  NetState target;
  ResidualMap residual;
  Loc p = 0;  // input side
  Loc q = 0;  // output side
  std::string symbol;
  Value value;
  std::size_t p_summand = 0;
  std::size_t q_summand = 0;

  std::string describe() const;
};

/// Every (R-React) redex of the state, ordered by input location, output location and summands.
std::vector<ReductionStep> internal_steps(const NetState& state, const DefEnv& env);

struct Bounds {
  std::size_t max_states = 20000;
  std::size_t max_depth = 1000;
};

enum class Status { Complete, Truncated };
const char* to_string(Status s);

/// Reachable states quotiented by canonical key, in BFS order (state 0 is the initial one).
struct StateSpace {
  std::vector<CanonicalState> states;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> succ;  // distinct successors
  std::vector<std::size_t> parent;             // BFS tree; parent[0] == 0
  std::vector<std::string> via;                // step taken from the parent
  std::vector<std::size_t> depth;
  Status status = Status::Complete;

  std::size_t size() const { return states.size(); }
  const NetState& state(std::size_t i) const { return states[i].state; }
  std::vector<std::size_t> path_to(std::size_t i) const;
};

StateSpace reachable(const NetState& state, const DefEnv& env, const Bounds& bounds = {});

struct IdleSearch {
  bool found = false;
  Status status = Status::Complete;
  std::vector<NetState> trace;          // initial state first, idle state last
  std::vector<std::string> steps;       // one description per transition in the trace
};

IdleSearch reduces_to_idle(const NetState& state, const DefEnv& env, const Bounds& bounds = {});

}  // namespace vccts
