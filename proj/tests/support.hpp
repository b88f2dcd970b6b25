#pragma once

#include <random>
#include <string>

#include "vccts/net_state.hpp"
#include "vccts/parser.hpp"

namespace testing {

/// Seed for randomized cases: --seed=N on the command line, else VCCTS_SEED, else fixed.
unsigned seed();

inline std::mt19937 rng(unsigned salt = 0) { return std::mt19937(seed() + salt); }

struct Loaded {
  vccts::Module module;
  vccts::NetState state(const std::string& name) const {
    return vccts::flatten(module.process(name), module.env);
  }
};

inline Loaded load(const std::string& source) { return {vccts::parse_module(source)}; }

inline std::vector<vccts::Value> ints(std::initializer_list<int> xs) {
  std::vector<vccts::Value> out;
  for (int x : xs) out.push_back(vccts::Value::integer(x));
  return out;
}

}  // namespace testing
