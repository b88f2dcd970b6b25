#pragma once

#include <string>
#include <vector>

#include "vccts/net_state.hpp"
#include "vccts/reduction.hpp"

namespace vccts {

/// fv or ~fv.
struct Action {
  std::string symbol;
  Polarity polarity = Polarity::Plain;
  Value value;

  Action dual() const;
  std::string str() const;
  friend auto operator<=>(const Action&, const Action&) = default;
};

/// p:alpha.(L1,...,Ln) or tau.
struct TransLabel {
  bool tau = true;
  Loc loc = 0;
  Action action;
  std::vector<std::vector<Loc>> sets;

  static TransLabel silent() { return {}; }
  std::string str() const;
  friend auto operator<=>(const TransLabel&, const TransLabel&) = default;
};

/// Multiset of labels kept as a sorted vector.
class LabelMultiset {
 public:
  LabelMultiset() = default;
  explicit LabelMultiset(std::vector<TransLabel> labels);

  std::size_t size() const { return labels_.size(); }
  std::size_t count(const TransLabel& l) const;
  std::size_t tau_count() const;
  const std::vector<TransLabel>& labels() const { return labels_; }
  std::vector<Action> visible_actions() const;  // sorted

  LabelMultiset unite(const LabelMultiset& other) const;
  LabelMultiset difference(const LabelMultiset& other) const;  // clamps at zero
  std::string str() const;

  friend bool operator==(const LabelMultiset&, const LabelMultiset&) = default;

 private:
  std::vector<TransLabel> labels_;
};

/// Visible labels at distinct locations carry distinct symbols, polarity ignored; tau is
/// unrelated to everything.
bool punrel(const LabelMultiset& delta);

/// One location's contribution to a transition: which summand fired and, for inputs, the value.
struct Choice {
  Loc loc = 0;
  std::size_t summand = 0;
  Value value;
  friend auto operator<=>(const Choice&, const Choice&) = default;
};
/// A visible label is one choice; a tau is an (input, output) pair of choices.
using Group = std::vector<Choice>;

struct LabeledStep {
  NetState target;
  LabelMultiset labels;
  ResidualMap residual;
  std::vector<Group> groups;  // parallel to the construction order of the labels

  /// Target edges between the descendants of `left` and of the remaining source locations.
  std::vector<LocPair> cross_edges(const std::set<Loc>& left) const;
};

std::vector<LabeledStep> single_transitions(const NetState& state, const DefEnv& env,
                                            const std::vector<Value>& universe);

/// All multi-labelled steps with at most `max_width` labels (Com2 closure).
std::vector<LabeledStep> multi_transitions(const NetState& state, const DefEnv& env,
                                           const std::vector<Value>& universe, std::size_t max_width);

/// Fires the given groups simultaneously, checking that each is a legal single step.
/// Returns nullopt if some group is not a transition of `state`.
std::optional<LabeledStep> step_for_groups(const NetState& state, const DefEnv& env,
                                           const std::vector<Value>& universe,
                                           const std::vector<Group>& groups);

struct WeakResult {
  NetState target;
  ResidualMap residual;          // target -> source
  ResidualMap landing;           // state after the first tau phase -> source
  std::vector<std::pair<Action, Loc>> origins;  // visible labels, located in the source via `landing`
};

struct WeakTransitions {
  std::vector<WeakResult> results;
  Status status = Status::Complete;
};

/// tau* . (multi-step whose visible actions are exactly `shape`, no taus) . tau*.
/// An empty shape gives the tau* closure.
WeakTransitions weak_transitions(const NetState& state, const DefEnv& env, const std::vector<Action>& shape,
                                 const std::vector<Value>& universe, const Bounds& bounds = {});

struct DiamondReport {
  std::size_t checked = 0;
  std::vector<std::string> counterexamples;
  bool ok() const { return counterexamples.empty(); }
};

/// Diamond check: every size-2 step splits into both interleavings with matching targets and
/// residuals; with `decompose` every step up to `max_width` is also replayed label by label.
DiamondReport diamond_check(const NetState& state, const DefEnv& env, const std::vector<Value>& universe,
                            std::size_t max_width = 2, bool decompose = true);

}  // namespace vccts
