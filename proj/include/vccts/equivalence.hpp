#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vccts/llts.hpp"

namespace vccts {

struct GameConfig {
  std::vector<Value> universe{Value::integer(0), Value::integer(1)};
  std::size_t max_width = 2;
  Bounds bounds;                  // per-exploration state and depth budgets
  std::size_t max_triples = 20000;  // expanded triples (weak), explored triples (strata)
};

enum class Verdict { Bisimilar, Distinguished, Inconclusive };
const char* to_string(Verdict v);

struct BarbedResult {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<BarbSet> barb;  // a barb set exhibited by one side only
  bool barb_on_left = true;
  std::string witness;          // human-readable distinction
  std::size_t left_states = 0, right_states = 0;
  std::vector<std::string> notes;  // budget provenance
};

/// Weak barbed bisimilarity on the bounded reachable graphs of both states.
BarbedResult weak_barbed_bisim(const NetState& p, const NetState& q, const DefEnv& env,
                               const GameConfig& cfg = {});

using LocRelation = std::set<LocPair>;

/// One challenge of the bisimulation game that the defender could not answer.
struct Play {
  bool from_left = true;
  std::string label;         // tau or the visible multiset
  std::size_t size = 0;      // number of labels
  std::string state;         // challenger state
  std::size_t depth = 0;     // distance of the triple from the initial one
};

struct WeakResultReport {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<Play> witness;         // from the initial triple down to an unanswerable challenge
  LocRelation relation;              // E of the initial triple, in input locations
  std::size_t triples = 0;
  std::vector<std::string> notes;
};

/// Localized early weak bisimilarity. `e` defaults to |P| x |Q|.
WeakResultReport weak_bisim(const NetState& p, const NetState& q, const DefEnv& env, const GameConfig& cfg = {},
                            const std::optional<LocRelation>& e = std::nullopt);

struct StrataReport {
  std::vector<bool> levels;   // levels[k]: initial triple in the k-th approximant
  bool stabilized = false;    // two consecutive levels agree on every explored triple
  Verdict verdict = Verdict::Inconclusive;  // stabilized verdict, when available
  std::size_t triples = 0;
  std::vector<std::string> notes;
};

StrataReport stratified_bisim(const NetState& p, const NetState& q, const DefEnv& env, const GameConfig& cfg,
                              std::size_t n);

struct ImageFiniteReport {
  bool within_bounds = true;
  std::size_t states = 0;
  std::size_t max_label_multisets = 0;  // distinct visible multisets from one state
  std::size_t max_weak_image = 0;       // largest tau* closure
  std::vector<std::string> warnings;
};

ImageFiniteReport image_finite_guard(const NetState& p, const DefEnv& env, const GameConfig& cfg = {});

struct ContextReport {
  DefEnv env;                  // input environment plus the context's symbols and constants
  TermPtr context;             // R
  std::size_t depth = 0;       // approximant at which the pair separates
  bool left_fixed = true;      // P|R is compared with every Q'|R (otherwise P'|R with Q|R)
  std::size_t derivatives = 0; // number of derivatives checked
  bool verified = false;
  std::vector<std::string> notes;
};

/// Builds a context R separating P and Q under weak barbed bisimilarity, following the
/// completeness construction, and checks it against every bounded derivative.
/// `depth` 0 searches for the smallest separating approximant. Throws Error if the pair is
/// not separated within the bounds.
ContextReport distinguishing_context(const NetState& p, const NetState& q, const DefEnv& env,
                                     const GameConfig& cfg = {}, std::size_t depth = 0);

/// P | R at the state level: R flattened on fresh locations, joined to every location of P.
NetState parallel_with(const NetState& p, const TermPtr& r, const DefEnv& env);

}  // namespace vccts
