#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "vccts/graph.hpp"
#include "vccts/syntax.hpp"

namespace vccts {

/// Flattened runtime state: one graph, one component per location, one global
/// restriction set over plain symbol names.
struct NetState {
  LocGraph graph;
  std::map<Loc, TermPtr> comp;
  std::set<std::string> restricted;

  std::vector<Loc> locations() const { return graph.vertices(); }
  const TermPtr& at(Loc p) const;
};

/// One summand of cs(S) after resolving conditionals and unfolding constants.
struct Head {
  enum class Kind { Input, Output, Nil, Idle };
  Kind kind = Kind::Nil;
  std::string symbol;  // state-level name (renamings applied)
  std::string var;     // Input binder
  Value value;         // Output payload, evaluated
  std::vector<TermPtr> children;
  std::size_t index = 0;  // position among the summands
};
using HeadForm = std::vector<Head>;

HeadForm cs_head(const TermPtr& s, const DefEnv& env);

/// Folds closed expressions, resolves conditionals with closed guards and merges renamings,
/// without unfolding constants. Used to give components a stable printed form.
TermPtr normalize_component(const TermPtr& s);

/// Flattens a data-closed canonical process. Throws SyntaxError if it is not canonical,
/// EvalError if it has free data variables.
NetState flatten(const TermPtr& term, const DefEnv& env);

/// Adds the flattening of `term` to `state` on fresh locations starting at `next_loc`
/// (advanced past the ones used). Inner restrictions are alpha-converted away from `used`,
/// which grows with every name chosen. Returns the new locations.
std::vector<Loc> flatten_into(NetState& state, const TermPtr& term, const DefEnv& env, Loc& next_loc,
                              std::set<std::string>& used);

/// Flattens `term` beside `state` on fresh locations, keeping its restrictions apart from the
/// state's names. With `complete` every new location is joined to every old one.
std::vector<Loc> attach(NetState& state, const TermPtr& term, const DefEnv& env, bool complete);

/// Symbol names occurring free anywhere in the state, plus its restricted names.
std::set<std::string> state_names(const NetState& state, const DefEnv& env);

/// Drops restricted names no component mentions any more.
void collect_restrictions(NetState& state, const DefEnv& env);

/// Replaces each firing location by the disjoint union of its flattened children.
/// Children inherit the neighbours of their parent (graph substitution); when several
/// adjacent locations fire together their child families become fully connected.
struct Firing {
  NetState target;
  ResidualMap residual;                                 // target -> source
  std::map<Loc, std::vector<std::vector<Loc>>> children; // per firing location: one set per child
};
Firing fire(const NetState& source, const std::map<Loc, std::vector<TermPtr>>& replacements,
            const DefEnv& env);

// ---- barbs

/// Symbol with polarity, as observed by barbs.
struct Barb {
  std::string name;
  Polarity polarity = Polarity::Plain;
  std::string str() const { return (polarity == Polarity::Co ? "~" : "") + name; }
  friend auto operator<=>(const Barb&, const Barb&) = default;
};
using BarbSet = std::set<Barb>;

BarbSet barbs_of_component(const TermPtr& s, const DefEnv& env);

/// Per-location barbs (locations in increasing order) with restricted names removed.
std::vector<BarbSet> barb_signature(const NetState& state, const DefEnv& env);

/// True iff B has a system of distinct representatives in the barb signature.
bool has_barb(const NetState& state, const BarbSet& b, const DefEnv& env);

/// Every satisfiable B (including the empty set).
std::set<BarbSet> satisfiable_barb_sets(const NetState& state, const DefEnv& env);

/// Every component's head form is the single summand `*`.
bool is_idle(const NetState& state, const DefEnv& env);

// ---- identity up to location renaming and restricted-name alpha-conversion

/// Printed component with restricted names replaced by ?0, ?1, ... in order of first use.
std::string component_fingerprint(const TermPtr& s, const std::set<std::string>& restricted,
                                  std::vector<std::string>* order = nullptr);

struct CanonicalState {
  NetState state;                  // locations renumbered 0..n-1 canonically
  std::string key;
  std::map<Loc, Loc> relabel;      // original -> canonical location
};

/// `extra` optionally adds a per-location tag to the colouring (e.g. residual images).
CanonicalState canonicalize(const NetState& state, const DefEnv& env,
                            const std::map<Loc, std::string>* extra = nullptr);

std::string state_key(const NetState& state, const DefEnv& env,
                      const std::map<Loc, std::string>* extra = nullptr);

std::string to_string(const NetState& state);

}  // namespace vccts
