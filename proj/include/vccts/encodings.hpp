#pragma once

#include <string>
#include <vector>

#include "vccts/automaton.hpp"
#include "vccts/net_state.hpp"

namespace vccts {

/// What a state without transitions encodes to.
enum class EmptyState { Idle, Nil };

/// Defines one constant per automaton state through the visited-set unrolling and returns the
/// constant for `q`. Constants reuse the state names unless the name is already defined, in
/// which case they are prefixed with the automaton name. Throws Error for unknown states and
/// SyntaxError for undeclared symbols or arity mismatches.
TermPtr automaton_to_process(const TreeAutomaton& a, const std::string& q, DefEnv& env,
                             EmptyState empty = EmptyState::Idle);

/// The unrolled body <A>_q^X (constants for states in X), without defining anything.
TermPtr automaton_body(const TreeAutomaton& a, const std::string& q, const std::set<std::string>& visited,
                       const std::map<std::string, std::string>& constant_of, EmptyState empty = EmptyState::Idle);

/// proc(t): the output-prefixed mirror of t with payload v everywhere.
TermPtr tree_to_process(const SigmaTree& t, const Value& v);

/// Direct top-down recognition. A leaf is accepted exactly at states without transitions.
bool recognizes(const TreeAutomaton& a, const std::string& q, const SigmaTree& t);

/// (S1 | ... | Sn) \ I on a complete graph. Throws SyntaxError when a non-unary symbol occurs.
NetState vccs_compose(const std::vector<TermPtr>& components, const std::set<std::string>& restricted,
                      const DefEnv& env);

enum class AbpVariant {
  Repaired,  // the receiver acknowledges the End message before becoming Succ
  Verbatim,  // as drawn: Succ directly in a conditional branch
};

/// Definition file for the protocol (symbols send, ack, f; constants A, Succ, P1, P2).
std::string abp_source(AbpVariant variant = AbpVariant::Repaired);

struct AbpSystem {
  DefEnv env;
  TermPtr term;    // (A | P1(t, b)) | P2([], b)
  NetState state;
};

/// Throws Error unless b is 0 or 1. The verbatim variant is not canonical and fails to flatten.
AbpSystem abp_system(const std::vector<Value>& messages, int b, AbpVariant variant = AbpVariant::Repaired);

/// The state contains components A, 0 and Succ(messages), and no sender or receiver is left.
bool abp_delivered(const NetState& state, const std::vector<Value>& messages);

}  // namespace vccts
