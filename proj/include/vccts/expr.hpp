#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "vccts/value.hpp"

namespace vccts {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class Op {
  Add, Sub, Mul,
  Eq, Ne, Lt, Le,
  And, Or, Not,
  Neg,
  MkPair, Fst, Snd,
  Head, Tail, Null, Append,
};

/// Expression tree. Boolean expressions share the representation; eval_bexpr
/// insists on a Bool result.
struct Expr {
  enum class Kind { Lit, Var, Apply, ListLit };

  Kind kind = Kind::Lit;
  Value lit;
  std::string var;
  Op op = Op::Add;
  std::vector<ExprPtr> args;
};

namespace expr {
ExprPtr lit(Value v);
ExprPtr var(std::string name);
ExprPtr apply(Op op, std::vector<ExprPtr> args);
ExprPtr list(std::vector<ExprPtr> items);
}  // namespace expr

Value eval_expr(const Expr& e);
bool eval_bexpr(const Expr& e);

std::set<std::string> free_vars(const Expr& e);
inline bool is_closed(const Expr& e) { return free_vars(e).empty(); }

/// e{v/x}; returns the same pointer when x does not occur.
ExprPtr subst(const ExprPtr& e, const std::string& x, const Value& v);

/// Replaces a closed expression by its literal value; open expressions are returned unchanged.
ExprPtr fold_closed(const ExprPtr& e);

std::string to_string(const Expr& e);
const char* op_name(Op op);

}  // namespace vccts
