#include "vccts/expr.hpp"

#include "vccts/error.hpp"

namespace vccts {

namespace expr {

ExprPtr lit(Value v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Lit;
  e->lit = std::move(v);
  return e;
}

ExprPtr var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  e->var = std::move(name);
  return e;
}

ExprPtr apply(Op op, std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Apply;
  e->op = op;
  e->args = std::move(args);
  return e;
}

ExprPtr list(std::vector<ExprPtr> items) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::ListLit;
  e->args = std::move(items);
  return e;
}

}  // namespace expr

const char* op_name(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Eq: return "=";
    case Op::Ne: return "!=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::And: return "&&";
    case Op::Or: return "||";
    case Op::Not: return "!";
    case Op::Neg: return "-";
    case Op::MkPair: return ",";
    case Op::Fst: return "fst";
    case Op::Snd: return "snd";
    case Op::Head: return "head";
    case Op::Tail: return "tail";
    case Op::Null: return "null";
    case Op::Append: return "append";
  }
  return "?";
}

namespace {

std::size_t arity_of(Op op) {
  switch (op) {
    case Op::Not:
    case Op::Neg:
    case Op::Fst:
    case Op::Snd:
    case Op::Head:
    case Op::Tail:
    case Op::Null: return 1;
    default: return 2;
  }
}

Value apply_op(Op op, const std::vector<Value>& a) {
  switch (op) {
    case Op::Add: return Value::integer(a[0].as_int() + a[1].as_int());
    case Op::Sub: return Value::integer(a[0].as_int() - a[1].as_int());
    case Op::Mul: return Value::integer(a[0].as_int() * a[1].as_int());
    case Op::Eq: return Value::boolean(a[0] == a[1]);
    case Op::Ne: return Value::boolean(!(a[0] == a[1]));
    case Op::Lt: return Value::boolean(a[0].as_int() < a[1].as_int());
    case Op::Le: return Value::boolean(a[0].as_int() <= a[1].as_int());
    case Op::And: return Value::boolean(a[0].as_bool() && a[1].as_bool());
    case Op::Or: return Value::boolean(a[0].as_bool() || a[1].as_bool());
    case Op::Not:
      if (a[0].is(Value::Kind::Bool)) return Value::boolean(!a[0].as_bool());
      // bit negation on {0,1}
      if (a[0].is(Value::Kind::Int) && (a[0].as_int() == 0 || a[0].as_int() == 1)) {
        return Value::integer(1 - a[0].as_int());
      }
      throw EvalError("negation of non-bit value " + a[0].str());
    case Op::Neg: return Value::integer(-a[0].as_int());
    case Op::MkPair: return Value::pair(a[0], a[1]);
    case Op::Fst: return a[0].first();
    case Op::Snd: return a[0].second();
    case Op::Head: {
      const auto& items = a[0].items();
      if (items.empty()) throw EvalError("head of empty list");
      return items.front();
    }
    case Op::Tail: {
      const auto& items = a[0].items();
      if (items.empty()) throw EvalError("tail of empty list");
      return Value::list({items.begin() + 1, items.end()});
    }
    case Op::Null: return Value::boolean(a[0].items().empty());
    case Op::Append: {
      auto items = a[0].items();
      items.push_back(a[1]);
      return Value::list(std::move(items));
    }
  }
  throw EvalError("unknown operator");
}

}  // namespace

Value eval_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Lit: return e.lit;
    case Expr::Kind::Var: throw EvalError("free variable '" + e.var + "' in expression");
    case Expr::Kind::ListLit: {
      std::vector<Value> items;
      items.reserve(e.args.size());
      for (const auto& a : e.args) items.push_back(eval_expr(*a));
      return Value::list(std::move(items));
    }
    case Expr::Kind::Apply: {
      if (e.args.size() != arity_of(e.op)) {
        throw EvalError(std::string("wrong operand count for ") + op_name(e.op));
      }
      // short-circuit boolean connectives
      if (e.op == Op::And || e.op == Op::Or) {
        const bool lhs = eval_expr(*e.args[0]).as_bool();
        if (e.op == Op::And && !lhs) return Value::boolean(false);
        if (e.op == Op::Or && lhs) return Value::boolean(true);
        return Value::boolean(eval_expr(*e.args[1]).as_bool());
      }
      std::vector<Value> vals;
      vals.reserve(e.args.size());
      for (const auto& a : e.args) vals.push_back(eval_expr(*a));
      return apply_op(e.op, vals);
    }
  }
  throw EvalError("malformed expression");
}

bool eval_bexpr(const Expr& e) { return eval_expr(e).as_bool(); }

namespace {
void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Var) out.insert(e.var);
  for (const auto& a : e.args) collect_vars(*a, out);
}
}  // namespace

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

ExprPtr subst(const ExprPtr& e, const std::string& x, const Value& v) {
  switch (e->kind) {
    case Expr::Kind::Lit: return e;
    case Expr::Kind::Var: return e->var == x ? expr::lit(v) : e;
    case Expr::Kind::Apply:
    case Expr::Kind::ListLit: {
      bool changed = false;
      std::vector<ExprPtr> args;
      args.reserve(e->args.size());
      for (const auto& a : e->args) {
        args.push_back(subst(a, x, v));
        changed = changed || args.back() != a;
      }
      if (!changed) return e;
      auto copy = std::make_shared<Expr>(*e);
      copy->args = std::move(args);
      return copy;
    }
  }
  return e;
}

ExprPtr fold_closed(const ExprPtr& e) {
  if (e->kind == Expr::Kind::Lit || !is_closed(*e)) return e;
  return expr::lit(eval_expr(*e));
}

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Lit: return e.lit.str();
    case Expr::Kind::Var: return e.var;
    case Expr::Kind::ListLit: {
      std::string out = "[";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += to_string(*e.args[i]);
      }
      return out + "]";
    }
    case Expr::Kind::Apply:
      switch (e.op) {
        case Op::MkPair: return "(" + to_string(*e.args[0]) + ", " + to_string(*e.args[1]) + ")";
        case Op::Not: return "!" + to_string(*e.args[0]);
        case Op::Neg: return "-" + to_string(*e.args[0]);
        case Op::Fst:
        case Op::Snd:
        case Op::Head:
        case Op::Tail:
        case Op::Null: return std::string(op_name(e.op)) + "(" + to_string(*e.args[0]) + ")";
        case Op::Append:
          return "append(" + to_string(*e.args[0]) + ", " + to_string(*e.args[1]) + ")";
        default:
          return "(" + to_string(*e.args[0]) + " " + op_name(e.op) + " " + to_string(*e.args[1]) +
                 ")";
      }
  }
  return {};
}

}  // namespace vccts
