#pragma once

#include <string>
#include <vector>

namespace vccts {

/// Sigma-tree: either the leaf `*` or f(x).(t1, ..., tn).
struct SigmaTree {
  std::string symbol;  // empty for the leaf
  std::string var = "x";
  std::vector<SigmaTree> children;

  static SigmaTree leaf() { return {}; }
  static SigmaTree node(std::string f, std::vector<SigmaTree> kids, std::string x = "x") {
    return {std::move(f), std::move(x), std::move(kids)};
  }
  bool is_leaf() const { return symbol.empty(); }
  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }
};

struct AutomatonTransition {
  std::string from;
  std::string symbol;
  std::vector<std::string> targets;
};

/// Top-down tree automaton. States double as constant names in the process encoding.
struct TreeAutomaton {
  std::string name;
  std::vector<std::string> states;
  std::vector<AutomatonTransition> transitions;
};

std::string to_string(const SigmaTree& t);

}  // namespace vccts
