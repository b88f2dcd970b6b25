#pragma once

#include <optional>
#include <random>

#include "vccts/automaton.hpp"
#include "vccts/net_state.hpp"

namespace vccts {

/// Seeded random instances for property checks. Every generator only draws from the rng.
struct GenOptions {
  std::size_t max_components = 4;
  std::size_t max_depth = 2;
  std::vector<Value> universe{Value::integer(0), Value::integer(1)};
  bool allow_restriction = true;
  bool allow_recursion = false;  // unary self-loops only, so the state space stays finite
  bool allow_binary = true;
};

/// Declares the generator alphabet (a/1, b/1, c/2) in `env`.
void declare_generator_symbols(DefEnv& env);

/// A random data-closed canonical process: a graph of guarded sums, possibly restricted.
TermPtr random_process(std::mt19937& rng, DefEnv& env, const GenOptions& opts = {});

/// A random automaton over u/1 and v/2 with 2-4 states (declares the symbols).
TreeAutomaton random_automaton(std::mt19937& rng, DefEnv& env);

/// A tree recognized at `q`, or nullopt when none is found within `max_depth`.
std::optional<SigmaTree> random_recognized_tree(std::mt19937& rng, const TreeAutomaton& a, const std::string& q,
                                                std::size_t max_depth = 4);

}  // namespace vccts
