#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vccts/expr.hpp"

namespace vccts {

enum class Polarity { Plain, Co };

/// A ranked symbol together with a polarity. The idle symbol `*` has arity 0 and is
/// its own dual; every other symbol has arity >= 1 and a distinct co-symbol.
struct Symbol {
  std::string name;
  int arity = 1;
  Polarity polarity = Polarity::Plain;

  static Symbol idle() { return {"*", 0, Polarity::Plain}; }

  bool is_idle() const { return arity == 0; }
  Symbol dual() const;
  std::string str() const;  // "f" or "~f"

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// Name of the symbol a (possibly freshened) name was derived from: "f'3" -> "f".
std::string base_symbol(const std::string& name);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Process terms. One tagged node type; fields not used by a kind stay empty.
///
/// Rename is internal: it records an alpha-conversion of restricted symbols applied
/// lazily to a sub-term (needed because constant bodies refer to symbols by name).
struct Term {
  enum class Kind { Idle, Nil, ProcVar, Input, Output, Graph, Sum, Restrict, Cond, Const, Rename };

  Kind kind = Kind::Nil;
  std::string name;                 // ProcVar, Const, prefix symbol
  std::string var;                  // Input binder
  ExprPtr expr;                     // Output payload, Cond guard
  std::vector<ExprPtr> args;        // Const arguments
  std::vector<TermPtr> children;    // prefix continuations, Sum/Cond branches, Graph components
  std::vector<std::string> locations;                          // Graph
  std::vector<std::pair<std::size_t, std::size_t>> edges;      // Graph, indices into locations
  std::vector<std::string> symbols;                            // Restrict (sorted, plain)
  std::map<std::string, std::string> renaming;                 // Rename
};

namespace term {
TermPtr idle();
TermPtr nil();
TermPtr var(std::string name);
TermPtr input(std::string symbol, std::string binder, std::vector<TermPtr> children);
TermPtr output(std::string symbol, ExprPtr payload, std::vector<TermPtr> children);
TermPtr graph(std::vector<std::string> locations, std::vector<std::pair<std::size_t, std::size_t>> edges,
              std::vector<TermPtr> components);
TermPtr sum(TermPtr lhs, TermPtr rhs);
/// Left-nested sum of the given summands; `0` when empty.
TermPtr sum(const std::vector<TermPtr>& summands);
TermPtr restrict(TermPtr body, std::set<std::string> symbols);
TermPtr cond(ExprPtr guard, TermPtr then_branch, TermPtr else_branch);
TermPtr constant(std::string name, std::vector<ExprPtr> args = {});
TermPtr rename(TermPtr body, std::map<std::string, std::string> renaming);
/// Single-vertex graph around an RCGS term.
TermPtr singleton(TermPtr component);
}  // namespace term

struct Definition {
  std::string name;
  std::vector<std::string> params;
  TermPtr body;
};

/// Symbol declarations and constant definitions. Immutable once shared.
class DefEnv {
 public:
  void declare_symbol(const std::string& name, int arity);
  /// Arity of a symbol name; freshened names resolve through their base symbol.
  std::optional<int> arity(const std::string& name) const;
  const std::map<std::string, int>& symbols() const { return symbols_; }

  void define(Definition def);
  const Definition* find(const std::string& name) const;
  const Definition& lookup(const std::string& name) const;  // throws SyntaxError
  const std::map<std::string, Definition>& definitions() const { return defs_; }

  /// Least-fixpoint sort of every constant (plain symbol names).
  const std::set<std::string>& constant_sort(const std::string& name) const;

 private:
  std::map<std::string, int> symbols_;
  std::map<std::string, Definition> defs_;
  mutable std::map<std::string, std::set<std::string>> sort_cache_;
  mutable bool sorts_ready_ = false;
  void compute_sorts() const;
};

enum class CanonClass { CGS, RCGS, CP, NotCanonical };

struct Classification {
  CanonClass cls = CanonClass::NotCanonical;
  std::string reason;
  std::vector<std::size_t> path;  // child indices from the root to the offending sub-term

  bool canonical() const { return cls != CanonClass::NotCanonical; }
  /// CGS and RCGS terms may stand where a canonical process is expected (one-vertex graph).
  bool usable_as_process() const { return canonical(); }
  bool usable_as_component() const { return cls == CanonClass::CGS || cls == CanonClass::RCGS; }
};

const char* to_string(CanonClass c);

/// Strongest class among CGS, RCGS, CP derivable for the term. Throws SyntaxError on
/// unresolved constants, arity mismatches and malformed graphs.
Classification check_canonical(const TermPtr& term, const DefEnv& env);

/// Classification of every definition body, with recursion resolved as a greatest fixpoint
/// and unguarded constant cycles rejected.
std::map<std::string, Classification> classify_definitions(const DefEnv& env);

TermPtr subst_value(const TermPtr& term, const std::string& var, const Value& value);
TermPtr subst_process(const TermPtr& host, const std::string& var, const TermPtr& payload);

/// Body of A(args) with the formals replaced by the evaluated arguments.
TermPtr unfold_constant(const Term& constant, const DefEnv& env);

std::set<std::string> sort_of(const TermPtr& term, const DefEnv& env);
std::set<std::string> free_data_vars(const TermPtr& term);

/// Printer hook for symbol names at their use sites (restricted-name anonymisation).
using SymbolPrinter = std::function<std::string(const std::string&)>;

std::string to_string(const TermPtr& term);
std::string to_string(const TermPtr& term, const SymbolPrinter& print_symbol);

/// Composition of two canonical processes over the flattened graph:
/// `complete` selects |, otherwise the plain union. Restrictions are hoisted with
/// alpha-conversion of clashing names.
TermPtr compose(const TermPtr& lhs, const TermPtr& rhs, bool complete, const DefEnv& env);

}  // namespace vccts
